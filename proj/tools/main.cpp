#include "commands.hpp"

int main(int argc, char** argv) { return swingctl::run(argc, argv); }
