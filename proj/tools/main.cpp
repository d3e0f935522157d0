#include "app.hpp"

int main(int argc, char** argv) { return slim::cli::run(std::vector<std::string>(argv + 1, argv + argc)); }
