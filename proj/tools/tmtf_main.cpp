#include "tmtf/cli.hpp"

int main(int argc, char** argv) { return tmtf::cli::run(argc, argv); }
