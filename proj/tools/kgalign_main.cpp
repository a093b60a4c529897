#include "kgalign/cli.hpp"

int main(int argc, char** argv) { return kgalign::cli::run(argc, argv); }
