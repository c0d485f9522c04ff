#include "restock/cli.hpp"

int main(int argc, char** argv) { return restock::run_cli(argc, argv); }
