#include "mtip/io/cli.hpp"

int main(int argc, char** argv) { return mtip::io::run_cli(argc, argv); }
