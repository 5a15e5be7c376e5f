#include "souschef/i18n/catalog.hpp"

#include <iostream>

// Fails the build when any language catalog is missing a key.
int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: check_catalogs <catalog dir>\n";
        return 2;
    }
    auto problems = souschef::i18n::check_catalogs(argv[1]);
    for (const auto& p : problems) std::cerr << "catalog: " << p << "\n";
    return problems.empty() ? 0 : 1;
}
