#include "rotnls/cli.hpp"

int main(int argc, char** argv) { return rotnls::cli_main(argc, argv); }
