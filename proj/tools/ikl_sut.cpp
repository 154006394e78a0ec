// ikl-sut <model.kripke>: serve a structure over the RESET/STEP/QUIT protocol
// on stdin/stdout.

#include <iostream>

#include "ikl/errors.hpp"
#include "ikl/kripke_io.hpp"
#include "ikl/sut_server.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: ikl-sut <model.kripke>\n";
        return 2;
    }
    try {
        const ikl::KripkeStructure model = ikl::load_kripke(argv[1]);
        ikl::serve_kripke(std::cin, std::cout, model);
    } catch (const std::exception& e) {
        std::cerr << "ikl-sut: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
