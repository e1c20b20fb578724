#include "cli.hpp"

int main(int argc, char** argv) { return gdss::cli::dispatch(argc, argv); }
