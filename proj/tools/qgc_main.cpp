#include "qgcurv/cli.hpp"

int main(int argc, char** argv) { return qgc::run_cli(argc, argv); }
