#include "ahgr/cli.hpp"

int main(int argc, char** argv) { return ahgr::cli::run(argc, argv); }
