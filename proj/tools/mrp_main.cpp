#include "mrp_cli.hpp"

int main(int argc, char** argv) { return mrp::cli::run(argc, argv, std::cout, std::cerr); }
