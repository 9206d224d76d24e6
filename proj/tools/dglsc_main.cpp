#include "dglsc/cli.hpp"

int main(int argc, char** argv) { return dglsc::cliMain(argc, argv); }
