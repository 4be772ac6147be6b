#include <iostream>

#include "biharm/experiments/cli.hpp"

int main(int argc, char** argv)
{
    return biharm::experiments::run_cli(argc, argv, std::cout, std::cerr);
}
