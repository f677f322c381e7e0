#include "inlslab/cli.hpp"

int main(int argc, char** argv) { return inls::cli::run_main(argc, argv); }
