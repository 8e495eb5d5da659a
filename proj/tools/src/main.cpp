#include "bilat/cli.hpp"

int main(int argc, char** argv) { return bilat::cli::run(argc, argv); }
