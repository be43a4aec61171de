#include "retrobeam/cli.hpp"

int main(int argc, char** argv)
{
    return retrobeam::cli::run(argc, argv);
}
