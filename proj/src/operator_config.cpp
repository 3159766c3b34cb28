#include "qspec/operator_config.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qspec/expression.hpp"

namespace qspec {

namespace {

[[noreturn]] void config_error(const std::string& what) {
    throw Error(ErrorCode::ConfigError, what);
}

const nlohmann::json& field(const nlohmann::json& node, const char* key) {
    if (!node.is_object() || !node.contains(key)) {
        config_error("missing field '" + std::string(key) + "' in " + node.dump());
    }
    return node.at(key);
}

double number(const nlohmann::json& j, const char* what) {
    if (!j.is_number()) config_error(std::string(what) + " must be a number");
    return j.get<double>();
}

ScalarFunction function_field(const nlohmann::json& node) {
    const nlohmann::json& f = field(node, "f");
    if (!f.is_string()) config_error("'f' must be an expression string");
    const Expression expr = Expression::parse(f.get<std::string>());
    return [expr](double x) { return expr(x); };
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    return path;
}

ComplexMatrix matrix_from_rows(const nlohmann::json& rows, Eigen::Index n) {
    if (!rows.is_array() || Eigen::Index(rows.size()) != n) {
        config_error("'rows' must hold " + std::to_string(n) + " rows");
    }
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[std::size_t(i)];
        if (!row.is_array() || Eigen::Index(row.size()) != n) {
            config_error("every row must hold " + std::to_string(n) + " entries");
        }
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex_from_json(row[std::size_t(j)]);
    }
    return m;
}

} // namespace

Complex complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    config_error("expected a number or [re, im], got " + j.dump());
}

BasisSpec basis_from_json(const nlohmann::json& j) {
    BasisSpec basis;
    const auto& kind = field(j, "kind");
    if (!kind.is_string()) config_error("basis.kind must be a string");
    try {
        basis.kind = basis_kind_from_string(kind.get<std::string>());
    } catch (const Error& e) {
        config_error(e.what());
    }
    const auto& n = field(j, "n");
    if (!n.is_number_integer()) config_error("basis.n must be an integer");
    basis.n = n.get<Eigen::Index>();
    basis.L = j.contains("L") ? number(j.at("L"), "basis.L") : 1.0;
    try {
        basis.validate();
    } catch (const Error& e) {
        config_error(e.what());
    }
    return basis;
}

nlohmann::json to_json(const BasisSpec& basis) {
    return {{"kind", std::string(to_string(basis.kind))}, {"n", basis.n}, {"L", basis.L}};
}

ComplexVector vector_from_json(const nlohmann::json& node, const BasisSpec& basis,
                               const std::filesystem::path& base_dir) {
    const Eigen::Index n = basis.n;
    if (node.is_string()) {
        if (node.get<std::string>() == "gaussian") return gaussian_state(basis);
        config_error("unknown vector '" + node.get<std::string>() + "'");
    }
    if (!node.is_object()) config_error("vector spec must be a string or an object");
    if (node.contains("values")) {
        const auto& values = node.at("values");
        if (!values.is_array() || Eigen::Index(values.size()) != n) {
            config_error("'values' must hold " + std::to_string(n) + " entries");
        }
        ComplexVector v(n);
        for (Eigen::Index k = 0; k < n; ++k) v(k) = complex_from_json(values[std::size_t(k)]);
        return v;
    }
    if (node.contains("mode")) {
        const auto k = field(node, "mode").get<Eigen::Index>();
        if (k < 0 || k >= n) config_error("mode index out of range");
        ComplexVector v = ComplexVector::Zero(n);
        v(k) = 1.0;
        return v;
    }
    if (node.contains("expr")) {
        if (basis.kind == BasisKind::Hermite) {
            config_error("sampled vectors need a grid basis; use 'mode' or 'values' on Hermite");
        }
        const Expression expr = Expression::parse(node.at("expr").get<std::string>());
        const RealVector x = basis.nodes();
        ComplexVector v(n);
        for (Eigen::Index k = 0; k < n; ++k) v(k) = expr(x(k));
        if (node.value("normalize", false)) {
            if (v.norm() == 0.0) config_error("cannot normalize a zero vector");
            v /= v.norm();
        }
        return v;
    }
    if (node.contains("apply")) {
        const LinearOperator op = operator_from_json(node.at("apply"), basis, base_dir);
        return op.matrix * vector_from_json(field(node, "to"), basis, base_dir);
    }
    config_error("unrecognized vector spec " + node.dump());
}

LinearOperator operator_from_json(const nlohmann::json& node, const BasisSpec& basis,
                                  const std::filesystem::path& base_dir) {
    std::string op;
    if (node.is_string()) {
        op = node.get<std::string>();
    } else {
        const auto& o = field(node, "op");
        if (!o.is_string()) config_error("'op' must be a string");
        op = o.get<std::string>();
    }

    if (op == "X") return position_operator(basis);
    if (op == "D") return derivative_operator(basis);
    if (op == "P") return momentum_operator(basis);
    if (op == "I" || op == "identity") return identity_operator(basis);
    if (op == "const") {
        const Complex c = complex_from_json(field(node, "value"));
        return {c * ComplexMatrix::Identity(basis.n, basis.n), basis, "const"};
    }
    if (op == "funcmul") {
        return multiplication_operator(basis, function_field(node),
                                       "funcmul(" + node.at("f").get<std::string>() + ")");
    }
    if (op == "diag") {
        const ComplexVector d = vector_from_json(node, basis, base_dir);
        return {ComplexMatrix(d.asDiagonal()), basis, "diag"};
    }
    if (op == "matrix") {
        if (node.contains("path")) {
            const auto path = resolve(base_dir, node.at("path").get<std::string>());
            std::ifstream in(path);
            if (!in) config_error("cannot open matrix file " + path.string());
            ComplexMatrix m = read_complex_matrix_csv(in);
            if (m.rows() != basis.n) config_error("matrix file dimension does not match the basis");
            return {std::move(m), basis, path.filename().string()};
        }
        return {matrix_from_rows(field(node, "rows"), basis.n), basis, "matrix"};
    }
    if (op == "rank_one") {
        return rank_one(vector_from_json(field(node, "u"), basis, base_dir),
                        vector_from_json(field(node, "v"), basis, base_dir), basis);
    }
    if (op == "oscillator") {
        const double alpha = node.contains("alpha") ? number(node.at("alpha"), "alpha") : 0.0;
        const double omega = node.contains("omega") ? number(node.at("omega"), "omega") : 1.0;
        return shifted_oscillator(alpha, omega, basis);
    }
    if (op == "example") {
        const std::string name = field(node, "name").get<std::string>();
        ExampleOptions opt;
        opt.alpha = node.value("alpha", opt.alpha);
        opt.omega = node.value("omega", opt.omega);
        ExamplePair pair = example_pair(name, basis, opt);
        const std::string role = node.value("role", std::string("A"));
        if (role == "A") return pair.A;
        if (role == "B") return pair.B;
        if (role == "T") return pair.T;
        config_error("example role must be A, B or T");
    }
    if (op == "add" || op == "mul") {
        const auto& args = field(node, "args");
        if (!args.is_array() || args.empty()) config_error("'args' must be a non-empty array");
        LinearOperator acc = operator_from_json(args[0], basis, base_dir);
        for (std::size_t k = 1; k < args.size(); ++k) {
            const LinearOperator next = operator_from_json(args[k], basis, base_dir);
            acc.matrix = op == "add" ? ComplexMatrix(acc.matrix + next.matrix)
                                     : ComplexMatrix(acc.matrix * next.matrix);
            acc.label += (op == "add" ? " + " : " * ") + next.label;
        }
        return acc;
    }
    if (op == "scale") {
        LinearOperator inner = operator_from_json(field(node, "arg"), basis, base_dir);
        inner.matrix *= complex_from_json(field(node, "factor"));
        return inner;
    }
    if (op == "adjoint") {
        LinearOperator inner = operator_from_json(field(node, "arg"), basis, base_dir);
        inner.matrix = inner.matrix.adjoint().eval();
        inner.label += "^dagger";
        return inner;
    }
    config_error("unknown operator '" + op + "'");
}

MetricOperator metric_from_json(const nlohmann::json& node, const BasisSpec& basis,
                                const std::filesystem::path& base_dir) {
    const std::string source = field(node, "source").get<std::string>();
    if (source == "identity") return MetricOperator(ComplexMatrix::Identity(basis.n, basis.n));
    if (source == "function_of_X") return metric_from_position(basis, function_field(node));
    if (source == "explicit") {
        const auto path = resolve(base_dir, field(node, "path").get<std::string>());
        std::ifstream in(path);
        if (!in) config_error("cannot open metric file " + path.string());
        const ComplexMatrix m = read_complex_matrix_csv(in);
        if (m.rows() != basis.n) config_error("metric file dimension does not match the basis");
        return MetricOperator(m);
    }
    config_error("unknown metric source '" + source + "'");
}

ComplexMatrix read_complex_matrix_csv(std::istream& in) {
    std::vector<std::vector<Complex>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> numbers;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                numbers.push_back(std::stod(cell));
            } catch (const std::exception&) {
                config_error("matrix CSV: bad number '" + cell + "'");
            }
        }
        if (numbers.size() % 2 != 0) config_error("matrix CSV: odd number of columns");
        std::vector<Complex> row;
        for (std::size_t k = 0; k < numbers.size(); k += 2) row.emplace_back(numbers[k], numbers[k + 1]);
        rows.push_back(std::move(row));
    }
    const Eigen::Index n = Eigen::Index(rows.size());
    if (n == 0) config_error("matrix CSV is empty");
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (Eigen::Index(rows[std::size_t(i)].size()) != n) config_error("matrix CSV is not square");
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[std::size_t(i)][std::size_t(j)];
    }
    return m;
}

} // namespace qspec
