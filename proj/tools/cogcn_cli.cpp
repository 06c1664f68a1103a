#include "cogcn/pipeline.hpp"

int main(int argc, char** argv) { return cogcn::run_cli(argc, argv); }
