#include "sswm/cli.hpp"

int main(int argc, char** argv) { return sswm::cli::execute(argc, argv); }
