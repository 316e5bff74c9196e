#include "mautner/cli.hpp"

int main(int argc, char** argv) {
    return mautner::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
