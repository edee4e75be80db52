#include "sat/dimacs.hpp"

#include <sstream>
#include <stdexcept>

namespace sat {

Dimacs parse_dimacs(const std::string& text) {
    Dimacs d;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    std::vector<Lit> clause;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            int nc;
            if (!(ls >> p >> cnf >> d.num_vars >> nc) || cnf != "cnf")
                throw std::runtime_error("bad DIMACS header: " + line);
            header = true;
            continue;
        }
        long v;
        while (ls >> v) {
            if (v == 0) {
                d.clauses.push_back(clause);
                clause.clear();
            } else {
                int var = (int)(v > 0 ? v : -v) - 1;
                if (var >= d.num_vars) d.num_vars = var + 1;
                clause.push_back(Lit(var, v < 0));
            }
        }
    }
    if (!clause.empty()) d.clauses.push_back(clause);
    if (!header && d.clauses.empty()) throw std::runtime_error("no DIMACS header");
    return d;
}

std::string write_dimacs(int num_vars, const std::vector<std::vector<Lit>>& clauses) {
    std::ostringstream out;
    out << "p cnf " << num_vars << " " << clauses.size() << "\n";
    for (const auto& c : clauses) {
        for (Lit l : c) out << (l.sign() ? -(l.var() + 1) : l.var() + 1) << " ";
        out << "0\n";
    }
    return out.str();
}

void load_dimacs(const Dimacs& d, Solver& s) {
    s.ensure_var(d.num_vars - 1);
    for (const auto& c : d.clauses) s.add_clause(c);
}

}  // namespace sat
