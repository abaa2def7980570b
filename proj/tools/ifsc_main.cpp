#include "ifsc/cli.hpp"

int main(int argc, char** argv) { return ifsc::run_cli(argc, argv); }
