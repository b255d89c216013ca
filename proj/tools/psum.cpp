#include "psum/cli.hpp"

int main(int argc, char** argv) { return psum::cli::main_entry(argc, argv); }
