#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "lgce/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            ids.push_back(std::stoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--criterion N]...\n";
            return 2;
        }
    }
    return lgce::acceptance::run(ids, std::cout, &std::cerr) ? 0 : 1;
}
