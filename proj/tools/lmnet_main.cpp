#include "lmnet/cli.hpp"

int main(int argc, char** argv) { return lmnet::run_cli(argc, argv); }
