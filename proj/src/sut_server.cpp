#include "ikl/sut_server.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace ikl {

std::size_t serve_kripke(std::istream& in, std::ostream& out, const KripkeStructure& model) {
    StateId current = model.initial();
    std::size_t handled = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string cmd, arg, extra;
        ls >> cmd >> arg >> extra;
        if (cmd.empty()) continue;
        ++handled;
        if (cmd == "QUIT") break;
        if (cmd == "RESET" && arg.empty()) {
            current = model.initial();
            out << "OK " << model.output(current).to_string() << '\n';
        } else if (cmd == "STEP" && !arg.empty() && extra.empty()) {
            if (auto s = model.alphabet().find(arg)) {
                current = model.next(current, *s);
                out << "OK " << model.output(current).to_string() << '\n';
            } else {
                out << "ERR unknown symbol " << arg << '\n';
            }
        } else {
            out << "ERR bad command\n";
        }
        out.flush();
    }
    return handled;
}

} // namespace ikl
