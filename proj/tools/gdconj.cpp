#include "gdconj/cli.hpp"

int main(int argc, char** argv) { return gdconj::cli::run(argc, argv); }
