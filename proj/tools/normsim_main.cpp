#include "normsim/cli.hpp"

int main(int argc, char** argv) {
    return normsim::cli::run({argv + 1, argv + argc});
}
