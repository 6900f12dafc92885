#include "wcetw/cli.h"

int main(int argc, char** argv) { return wcetw::cli::main(argc, argv); }
