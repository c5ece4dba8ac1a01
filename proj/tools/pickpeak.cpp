#include "pickpeak/cli.hpp"

int main(int argc, char** argv) { return pickpeak::cli::run(argc, argv); }
