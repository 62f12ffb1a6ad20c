#include "gadmm/experiments.hpp"

int main(int argc, char** argv) { return gadmm::cli_main(argc, argv); }
