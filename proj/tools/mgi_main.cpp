// mgi: minimalist-grammar parsing and lexicon inference.
//
// Subcommands: parse, validate, infer, ablate, export. See README.md for the
// file formats and the report schema.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cir/export.hpp"
#include "enc/encoder.hpp"
#include "inf/inference.hpp"
#include "json.hpp"
#include "mg/parser.hpp"
#include "sat/dimacs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
}

struct Options {
    enc::Config cfg;
    inf::CostSpec cost;
    int samples = 5;
};

void apply_config_json(Options& o, const json& j) {
    auto& b = o.cfg.bounds;
    b.max_feats = j.value("max_feats", b.max_feats);
    b.max_phrasal_moves = j.value("max_phrasal_moves", b.max_phrasal_moves);
    b.max_head_moves = j.value("max_head_moves", b.max_head_moves);
    b.covert_budget = j.value("covert_budget", b.covert_budget);
    b.derivation_cap = j.value("derivation_cap", b.derivation_cap);
    o.cfg.max_items = j.value("max_items", o.cfg.max_items);
    o.cfg.categories = j.value("categories", o.cfg.categories);
    o.cfg.lic_categories = j.value("lic_categories", o.cfg.lic_categories);
    o.cfg.break_category_symmetry = j.value("break_category_symmetry", o.cfg.break_category_symmetry);
    o.cfg.universal_categories = j.value("universal_categories", o.cfg.universal_categories);
    o.cfg.conflict_budget = j.value<int64_t>("conflict_budget", o.cfg.conflict_budget);
    o.cfg.seed = j.value<uint64_t>("seed", o.cfg.seed);
    if (j.contains("disabled_groups"))
        o.cfg.disabled_groups = j.at("disabled_groups").get<std::vector<std::string>>();
    if (j.contains("cost_order")) o.cost.order = j.at("cost_order").get<std::vector<std::string>>();
    o.samples = j.value("samples", o.samples);
}

json config_json(const Options& o) {
    json j;
    j["max_feats"] = o.cfg.bounds.max_feats;
    j["max_phrasal_moves"] = o.cfg.bounds.max_phrasal_moves;
    j["max_head_moves"] = o.cfg.bounds.max_head_moves;
    j["covert_budget"] = o.cfg.bounds.covert_budget;
    j["derivation_cap"] = o.cfg.bounds.derivation_cap;
    j["max_items"] = o.cfg.max_items;
    j["categories"] = o.cfg.categories;
    j["lic_categories"] = o.cfg.lic_categories;
    j["break_category_symmetry"] = o.cfg.break_category_symmetry;
    j["universal_categories"] = o.cfg.universal_categories;
    j["disabled_groups"] = o.cfg.disabled_groups;
    j["conflict_budget"] = o.cfg.conflict_budget;
    j["seed"] = o.cfg.seed;
    j["cost_order"] = o.cost.order;
    j["samples"] = o.samples;
    return j;
}

void add_common_flags(CLI::App* cmd, Options& o, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");
    cmd->add_option("--max-feats", o.cfg.bounds.max_feats, "max features per item (excluding C)");
    cmd->add_option("--max-moves", o.cfg.bounds.max_phrasal_moves, "max phrasal movements per parse");
    cmd->add_option("--max-head-moves", o.cfg.bounds.max_head_moves, "max head movements per parse");
    cmd->add_option("--covert-budget", o.cfg.bounds.covert_budget, "covert leaves per parse (0 or 1)");
    cmd->add_option("--derivation-cap", o.cfg.bounds.derivation_cap, "parser derivation cap");
    cmd->add_option("--max-items", o.cfg.max_items, "lexicon slot bound");
    cmd->add_option("--categories", o.cfg.categories, "selectional category inventory size");
    cmd->add_option("--lic-categories", o.cfg.lic_categories, "licensing category inventory size");
    cmd->add_flag("--break-symmetry", o.cfg.break_category_symmetry, "collapse category permutations");
    cmd->add_flag("--universal-categories", o.cfg.universal_categories, "universal-category axiom pack (stub)");
    cmd->add_option("--disable-group", o.cfg.disabled_groups, "disable an axiom group (repeatable)");
    cmd->add_option("--conflict-budget", o.cfg.conflict_budget, "solver conflict budget, -1 = unlimited");
    cmd->add_option("--seed", o.cfg.seed, "solver seed");
}

void load_config_file(Options& o, const std::string& config_path) {
    if (config_path.empty()) return;
    json j;
    try {
        j = json::parse(slurp(config_path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error("bad config JSON: " + std::string(e.what()));
    }
    apply_config_json(o, j);
}

json relations_json(const mg::RelationSet& rs, const std::vector<std::string>& tokens) {
    json out = json::array();
    for (const auto& r : rs.relations) {
        json e;
        e["kind"] = r.kind == mg::Relation::Kind::Arg ? "arg" : "agree";
        e["a"] = tokens[r.a];
        e["b"] = tokens[r.b];
        out.push_back(e);
    }
    return out;
}

int cmd_parse(const std::string& lexicon_path, const std::string& sentence, const std::string& type,
              const Options& o, int max_trees, const std::string& dot_path, bool show_relations) {
    auto lex = mg::parse_lexicon_text(slurp(lexicon_path));
    auto tokens = mg::tokenize(sentence);
    if (tokens.empty()) {
        std::cerr << "error: empty sentence\n";
        return 2;
    }
    auto st = type == "intr" ? mg::SentenceType::Intr : mg::SentenceType::Decl;
    auto result = mg::parse(lex, tokens, st, o.cfg.bounds);
    int shown = 0;
    for (const auto& d : result.derivations) {
        if (shown >= max_trees) break;
        std::cout << "derivation " << ++shown << ":\n" << mg::render_tree_text(d);
        if (show_relations) {
            auto rs = mg::extract_relations(d);
            std::cout << "relations: " << relations_json(rs, tokens).dump() << "\n";
        }
        std::cout << "\n";
        if (!dot_path.empty() && shown == 1) write_file(dot_path, mg::render_tree_dot(d));
    }
    std::cout << result.derivations.size() << " derivation(s)";
    if (result.capped) std::cout << " (cap reached)";
    std::cout << "\n";
    return result.derivations.empty() ? 1 : 0;
}

int cmd_validate(const std::string& lexicon_path, const std::string& corpus_path, const Options& o) {
    auto lex = mg::parse_lexicon_text(slurp(lexicon_path));
    auto corpus = mg::load_corpus_file(corpus_path);
    bool all = true;
    for (const auto& s : corpus) {
        bool ok = mg::validate(lex, s, o.cfg.bounds);
        all = all && ok;
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << s.text << "\n";
    }
    return all ? 0 : 1;
}

int cmd_infer(const std::string& corpus_path, const std::string& out_dir, Options& o, bool dot) {
    auto corpus = mg::load_corpus_file(corpus_path);
    fs::create_directories(out_dir);
    auto result = inf::run(corpus, o.cfg, o.cost, o.samples);
    if (!result.ok) {
        std::cerr << "error: " << result.error << "\n";
        return 1;
    }
    json report;
    report["config"] = config_json(o);
    report["sentences"] = json::array();
    for (const auto& s : corpus) report["sentences"].push_back(s.text);
    report["optimal"] = result.optimal;
    report["objectives"] = result.objectives;
    report["samples"] = json::array();

    for (size_t k = 0; k < result.samples.size(); ++k) {
        const auto& sample = result.samples[k];
        if (!sample.validated) {
            std::cerr << "error: sampled lexicon failed parser re-validation\n";
            return 1;
        }
        std::string lex_name = "lexicon_" + std::to_string(k) + ".mg";
        write_file(fs::path(out_dir) / lex_name, mg::print_lexicon_text(sample.lexicon));
        fs::path deriv_dir = fs::path(out_dir) / ("derivations_" + std::to_string(k));
        fs::create_directories(deriv_dir);
        for (size_t i = 0; i < sample.parses.size(); ++i) {
            write_file(deriv_dir / ("sentence_" + std::to_string(i) + ".txt"),
                       mg::render_tree_text(sample.parses[i]));
            if (dot)
                write_file(deriv_dir / ("sentence_" + std::to_string(i) + ".dot"),
                           mg::render_tree_dot(sample.parses[i]));
        }
        json sj;
        sj["lexicon_file"] = lex_name;
        sj["items"] = sample.items;
        sj["lexicon_features"] = sample.lexicon_features;
        sj["parse_features"] = sample.parse_features;
        sj["distinct_selectors"] = sample.distinct_selectors;
        sj["validated"] = sample.validated;
        report["samples"].push_back(sj);
    }
    if (!result.samples.empty()) {
        report["objectives"]["lexicon_features"] = result.samples[0].lexicon_features;
        report["objectives"]["parse_features"] = result.samples[0].parse_features;
        report["objectives"]["distinct_selectors_achieved"] = result.samples[0].distinct_selectors;
        report["objectives"]["items_achieved"] = result.samples[0].items;
    }
    write_file(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
    std::cout << report["objectives"].dump(2) << "\n";
    std::cerr << "conflicts: " << result.conflicts << "\n";
    return 0;
}

int cmd_ablate(const std::string& corpus_path, const std::string& group, Options& o,
               const std::string& out_path) {
    auto corpus = mg::load_corpus_file(corpus_path);
    auto report = inf::ablate(corpus, o.cfg, o.cost, group);
    json j;
    j["group"] = report.group;
    j["baseline"] = {{"sat", report.baseline_sat}, {"objectives", report.baseline_objectives}};
    j["ablated"] = {{"sat", report.ablated_sat}, {"objectives", report.ablated_objectives}};
    std::string text = j.dump(2) + "\n";
    if (!out_path.empty()) write_file(out_path, text);
    std::cout << text;
    return 0;
}

int cmd_export(const std::string& corpus_path, const std::string& out_dir, Options& o, int upto,
               const std::string& pin_lexicon) {
    auto corpus = mg::load_corpus_file(corpus_path);
    if (upto < 0 || upto > (int)corpus.size()) upto = (int)corpus.size();
    std::vector<std::string> vocab;
    for (const auto& s : corpus)
        for (const auto& t : s.tokens) vocab.push_back(t);

    enc::EncoderState state(o.cfg, vocab);
    for (int i = 0; i < upto; ++i) state.encode_sentence(corpus[i]);
    if (!pin_lexicon.empty()) state.pin_lexicon_permanently(mg::parse_lexicon_text(slurp(pin_lexicon)));

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "state.smt2", cir::export_smtlib(state.problem()));
    // DIMACS straight from the live grounding (includes any pin clauses)
    write_file(fs::path(out_dir) / "state.cnf",
               sat::write_dimacs(state.solver().num_vars(), state.solver().original_clauses()));
    auto infos = state.grounder().var_map();
    json vm = json::array();
    for (size_t v = 0; v < infos.size(); ++v) {
        json e;
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
    write_file(fs::path(out_dir) / "varmap.json", vm.dump() + "\n");
    json mf = json::array();
    for (const auto& [g, range] : state.grounder().manifest()) {
        json e;
        e["group"] = g;
        e["clauses"] = {range.begin, range.end};
        mf.push_back(e);
    }
    write_file(fs::path(out_dir) / "manifest.json", mf.dump(1) + "\n");
    std::cerr << "exported " << state.solver().num_vars() << " vars, " << state.solver().num_clauses()
              << " clauses\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimalist-grammar parsing and lexicon inference"};
    app.require_subcommand(1);

    Options o;
    std::string config_path;
    std::string lexicon_path, corpus_path, sentence, type = "decl", out_dir, dot_path, group, pin_lexicon;
    int max_trees = 5, upto = -1;
    bool dot = false;

    auto* parse_cmd = app.add_subcommand("parse", "parse a sentence with a lexicon");
    parse_cmd->add_option("--lexicon", lexicon_path, "lexicon text file")->required();
    parse_cmd->add_option("--sentence", sentence, "sentence text")->required();
    parse_cmd->add_option("--type", type, "decl or intr")->check(CLI::IsMember({"decl", "intr"}));
    parse_cmd->add_option("--max-trees", max_trees, "derivations to print");
    parse_cmd->add_option("--dot", dot_path, "write the first derivation as DOT");
    add_common_flags(parse_cmd, o, config_path);

    auto* validate_cmd = app.add_subcommand("validate", "validate a lexicon against an annotated corpus");
    validate_cmd->add_option("--lexicon", lexicon_path, "lexicon text file")->required();
    validate_cmd->add_option("--corpus", corpus_path, "JSONL corpus")->required();
    add_common_flags(validate_cmd, o, config_path);

    auto* infer_cmd = app.add_subcommand("infer", "infer lexicons from an annotated corpus");
    infer_cmd->add_option("--corpus", corpus_path, "JSONL corpus")->required();
    infer_cmd->add_option("--out", out_dir, "output directory")->required();
    infer_cmd->add_option("--samples", o.samples, "number of lexicons to sample");
    infer_cmd->add_option("--cost", o.cost.order, "objective order (items, features, distinct_selectors)");
    infer_cmd->add_flag("--dot", dot, "also write DOT derivations");
    add_common_flags(infer_cmd, o, config_path);

    auto* ablate_cmd = app.add_subcommand("ablate", "compare objective values with an axiom group removed");
    ablate_cmd->add_option("--corpus", corpus_path, "JSONL corpus")->required();
    ablate_cmd->add_option("--group", group, "axiom group (optionally group:sentence)")->required();
    ablate_cmd->add_option("--out", out_dir, "write the report here");
    ablate_cmd->add_option("--cost", o.cost.order, "objective order");
    add_common_flags(ablate_cmd, o, config_path);

    auto* export_cmd = app.add_subcommand("export", "export the state as SMT-LIB2 and DIMACS");
    export_cmd->add_option("--corpus", corpus_path, "JSONL corpus")->required();
    export_cmd->add_option("--out", out_dir, "output directory")->required();
    export_cmd->add_option("--upto", upto, "consume only the first N sentences");
    export_cmd->add_option("--pin-lexicon", pin_lexicon, "pin the lexicon model to this lexicon");
    add_common_flags(export_cmd, o, config_path);

    CLI11_PARSE(app, argc, argv);

    try {
        // config file first, then flags re-applied by CLI11 (already parsed
        // into o); re-parse config-provided values only where flags were
        // not given
        if (!config_path.empty()) {
            Options from_file;
            load_config_file(from_file, config_path);
            // flags not explicitly set fall back to config values
            Options merged = from_file;
            for (auto* cmd : {parse_cmd, validate_cmd, infer_cmd, ablate_cmd, export_cmd}) {
                (void)cmd;
            }
            // CLI11 already wrote explicit flags into o; merge: start from
            // file values, overwrite with o where the option was passed.
            // Simplest robust rule: file supplies defaults unless the flag
            // appeared on the command line.
            auto count = [&](const char* name) {
                for (auto* cmd : app.get_subcommands())
                    if (cmd->count(name)) return true;
                return false;
            };
            if (!count("--max-feats")) o.cfg.bounds.max_feats = merged.cfg.bounds.max_feats;
            if (!count("--max-moves")) o.cfg.bounds.max_phrasal_moves = merged.cfg.bounds.max_phrasal_moves;
            if (!count("--max-head-moves")) o.cfg.bounds.max_head_moves = merged.cfg.bounds.max_head_moves;
            if (!count("--covert-budget")) o.cfg.bounds.covert_budget = merged.cfg.bounds.covert_budget;
            if (!count("--derivation-cap")) o.cfg.bounds.derivation_cap = merged.cfg.bounds.derivation_cap;
            if (!count("--max-items")) o.cfg.max_items = merged.cfg.max_items;
            if (!count("--categories")) o.cfg.categories = merged.cfg.categories;
            if (!count("--lic-categories")) o.cfg.lic_categories = merged.cfg.lic_categories;
            if (!count("--break-symmetry"))
                o.cfg.break_category_symmetry = merged.cfg.break_category_symmetry;
            if (!count("--universal-categories")) o.cfg.universal_categories = merged.cfg.universal_categories;
            if (!count("--disable-group")) o.cfg.disabled_groups = merged.cfg.disabled_groups;
            if (!count("--conflict-budget")) o.cfg.conflict_budget = merged.cfg.conflict_budget;
            if (!count("--seed")) o.cfg.seed = merged.cfg.seed;
            if (!count("--cost")) o.cost = merged.cost;
            if (!count("--samples")) o.samples = merged.samples;
        }

        if (parse_cmd->parsed())
            return cmd_parse(lexicon_path, sentence, type, o, max_trees, dot_path, true);
        if (validate_cmd->parsed()) return cmd_validate(lexicon_path, corpus_path, o);
        if (infer_cmd->parsed()) return cmd_infer(corpus_path, out_dir, o, dot);
        if (ablate_cmd->parsed()) return cmd_ablate(corpus_path, group, o, out_dir);
        if (export_cmd->parsed()) return cmd_export(corpus_path, out_dir, o, upto, pin_lexicon);
    } catch (const mg::CorpusParseError& e) {
        std::cerr << "corpus error: " << e.what() << "\n";
        return 2;
    } catch (const mg::LexiconParseError& e) {
        std::cerr << "lexicon error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
