#include "svmf/cli.hpp"

int main(int argc, char** argv) { return svmf::cli::run(argc, argv); }
