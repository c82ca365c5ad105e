#include "confsym/cli.hpp"

int main(int argc, char** argv) { return confsym::cli::run(argc, argv); }
