#include "risnet/cli.hpp"

int
main(int argc, char** argv)
{
    return risnet::cli::main_entry(argc, argv);
}
