#include "cli.hpp"

int main(int argc, char** argv) { return qspec::cli::main_entry(argc, argv); }
