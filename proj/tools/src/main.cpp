#include "ctree_cli/cli.hpp"

int main(int argc, char** argv) { return ctree::cli::run(argc, argv); }
