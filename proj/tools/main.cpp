#include "comove/cli.hpp"

int main(int argc, char** argv) {
    return comove::run_cli(argc, argv);
}
