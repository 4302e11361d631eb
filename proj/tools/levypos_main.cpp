#include "levypos/commands.hpp"

int main(int argc, char** argv) {
    return levypos::cli_main(argc, argv);
}
