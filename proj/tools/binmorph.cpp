#include "binmorph/cli.hpp"

int main(int argc, char** argv) {
    return binmorph::cli::run(argc, argv);
}
