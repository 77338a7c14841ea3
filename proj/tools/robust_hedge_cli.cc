#include "robust_hedge/cli.hpp"

int main(int argc, char** argv) { return robust_hedge::cli::run_main(argc, argv); }
