#include "cir/export.hpp"

#include <sstream>

#include "json.hpp"
#include "sat/dimacs.hpp"

namespace cir {

namespace {

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum((unsigned char)c) || c == '_' || c == '.') ? c : '_';
    return out;
}

std::string const_name(const Problem& p, int sort, int value) {
    return sanitize(p.sorts[sort].name) + "!" + std::to_string(value);
}

void print_term(const Problem& p, const Term& t, std::ostream& out) {
    const Table& tab = p.tables[t.table];
    if (tab.domain.empty()) {
        out << sanitize(tab.name);
        return;
    }
    out << "(" << sanitize(tab.name);
    for (size_t i = 0; i < t.args.size(); ++i) out << " " << const_name(p, tab.domain[i], t.args[i]);
    out << ")";
}

void print_formula(const Problem& p, const Formula& f, std::ostream& out) {
    switch (f->op) {
        case Op::True: out << "true"; break;
        case Op::False: out << "false"; break;
        case Op::BVar: out << sanitize(p.bool_names[f->bvar]); break;
        case Op::CellEq: {
            out << "(= ";
            print_term(p, f->t1, out);
            out << " " << const_name(p, p.tables[f->t1.table].codomain, f->value) << ")";
            break;
        }
        case Op::TermEq: {
            out << "(= ";
            print_term(p, f->t1, out);
            out << " ";
            print_term(p, f->t2, out);
            out << ")";
            break;
        }
        case Op::Not:
            out << "(not ";
            print_formula(p, f->kids[0], out);
            out << ")";
            break;
        case Op::And:
        case Op::Or: {
            out << (f->op == Op::And ? "(and" : "(or");
            for (const auto& k : f->kids) {
                out << " ";
                print_formula(p, k, out);
            }
            out << ")";
            break;
        }
        case Op::Implies:
            out << "(=> ";
            print_formula(p, f->kids[0], out);
            out << " ";
            print_formula(p, f->kids[1], out);
            out << ")";
            break;
        case Op::Iff:
            out << "(= ";
            print_formula(p, f->kids[0], out);
            out << " ";
            print_formula(p, f->kids[1], out);
            out << ")";
            break;
    }
}

}  // namespace

std::string export_smtlib(const Problem& p) {
    std::ostringstream out;
    out << "(set-logic ALL)\n";
    for (size_t s = 0; s < p.sorts.size(); ++s) {
        out << "(declare-datatypes ((" << sanitize(p.sorts[s].name) << " 0)) ((";
        for (int v = 0; v < p.sorts[s].size; ++v) out << " (" << const_name(p, (int)s, v) << ")";
        out << " )))\n";
    }
    for (const auto& t : p.tables) {
        out << "(declare-fun " << sanitize(t.name) << " (";
        for (size_t i = 0; i < t.domain.size(); ++i) {
            if (i) out << " ";
            out << sanitize(p.sorts[t.domain[i]].name);
        }
        out << ") " << sanitize(p.sorts[t.codomain].name) << ")\n";
    }
    for (const auto& b : p.bool_names) out << "(declare-const " << sanitize(b) << " Bool)\n";
    for (const auto& a : p.assertions) {
        out << "; group " << a.group << "\n(assert ";
        print_formula(p, a.f, out);
        out << ")\n";
    }
    for (const auto& c : p.cards) {
        out << "; group " << c.group << "\n(assert (";
        out << (c.card.sense == Sense::AtMost ? "<=" : c.card.sense == Sense::AtLeast ? ">=" : "=");
        out << " (+";
        for (const auto& l : c.card.lits) {
            out << " (ite ";
            if (l.is_bool) {
                if (!l.positive) out << "(not ";
                out << sanitize(p.bool_names[l.bvar]);
                if (!l.positive) out << ")";
            } else {
                if (!l.positive) out << "(not ";
                out << "(= ";
                print_term(p, l.t, out);
                out << " " << const_name(p, p.tables[l.t.table].codomain, l.value) << ")";
                if (!l.positive) out << ")";
            }
            out << " 1 0)";
        }
        out << ") " << c.card.bound << "))\n";
    }
    out << "(check-sat)\n";
    return out.str();
}

DimacsExport export_dimacs(Problem& p) {
    sat::Solver solver;
    Grounder g(p, solver);
    g.ground_pending();

    DimacsExport out;
    out.dimacs = sat::write_dimacs(solver.num_vars(), solver.original_clauses());

    nlohmann::json vm = nlohmann::json::array();
    auto infos = g.var_map();
    for (size_t v = 0; v < infos.size(); ++v) {
        nlohmann::json e;
        e["var"] = v + 1;
        if (!infos[v].table.empty()) {
            e["table"] = infos[v].table;
            e["args"] = infos[v].args;
            e["value"] = infos[v].value;
        } else if (!infos[v].name.empty()) {
            e["bool"] = infos[v].name;
        } else {
            e["aux"] = true;
        }
        vm.push_back(e);
    }
    out.varmap_json = vm.dump(1);

    nlohmann::json mf = nlohmann::json::array();
    for (const auto& [group, range] : g.manifest()) {
        nlohmann::json e;
        e["group"] = group;
        e["clauses"] = {range.begin, range.end};
        mf.push_back(e);
    }
    out.manifest_json = mf.dump(1);
    return out;
}

}  // namespace cir
