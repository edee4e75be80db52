#include "inf/inference.hpp"

#include <algorithm>
#include <set>

#include "sat/optimize.hpp"

namespace inf {

int count_lexicon_features(const mg::Lexicon& lex) {
    int n = 0;
    for (const auto& item : lex.items) n += item.feature_count();
    return n;
}

int count_parse_features(const std::vector<mg::DerivationTree>& parses) {
    int n = 0;
    for (const auto& d : parses) {
        for (const auto& node : d.nodes)
            if (node.leaf()) n += node.item.feature_count();
        n += 1;  // the Complete feature the root retains
    }
    return n;
}

int count_distinct_selectors(const mg::Lexicon& lex) {
    std::set<int> cats;
    for (const auto& item : lex.items)
        for (const auto& f : item.feats)
            if (f.kind == mg::FeatureKind::Selector) cats.insert(f.cat);
    return (int)cats.size();
}

namespace {

std::vector<std::string> corpus_vocab(const std::vector<mg::AnnotatedSentence>& corpus) {
    std::vector<std::string> vocab;
    for (const auto& s : corpus) vocab.insert(vocab.end(), s.tokens.begin(), s.tokens.end());
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    return vocab;
}

std::vector<sat::Objective> resolve_objectives(enc::EncoderState& state, const CostSpec& cost,
                                               std::vector<std::string>& names) {
    std::vector<enc::ObjectiveSpec> specs;
    for (const auto& name : cost.order) {
        if (name == "items")
            specs.push_back(state.objective_entries());
        else if (name == "features")
            specs.push_back(state.objective_features());
        else if (name == "distinct_selectors")
            specs.push_back(state.objective_distinct_selectors());
        else
            throw std::invalid_argument("unknown objective: " + name);
    }
    std::vector<sat::Objective> out;
    for (const auto& spec : specs) {
        sat::Objective o;
        o.maximize = spec.maximize;
        for (const auto& cl : spec.lits) {
            sat::Lit l = cl.is_bool ? state.grounder().bool_lit(cl.bvar) : state.grounder().cell_lit(cl.t, cl.value);
            o.lits.push_back(cl.positive ? l : ~l);
        }
        names.push_back(spec.name);
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace

RunResult run(const std::vector<mg::AnnotatedSentence>& corpus, const enc::Config& cfg, const CostSpec& cost,
              int sample_count) {
    RunResult result;
    if (corpus.empty()) {
        result.error = "empty corpus";
        return result;
    }
    enc::EncoderState state(cfg, corpus_vocab(corpus));
    for (const auto& s : corpus) {
        state.encode_sentence(s);
        sat::Status st = state.solve();
        if (st == sat::Status::Unsat) {
            result.error = "corpus inconsistent under bounds; first failing sentence: \"" + s.text + "\"";
            return result;
        }
        if (st == sat::Status::Unknown) {
            result.error = "solver budget exhausted while consuming \"" + s.text + "\"";
            return result;
        }
    }

    std::vector<std::string> names;
    auto objectives = resolve_objectives(state, cost, names);
    auto opt = sat::optimize_lexicographic(state.solver(), objectives);
    if (opt.status != sat::Status::Sat) {
        result.error = "optimization failed";
        return result;
    }
    result.optimal = opt.optimal;
    for (size_t i = 0; i < names.size(); ++i) {
        int v = opt.values[i];
        if (names[i] == "features") v += (int)corpus.size();  // per-parse Complete
        result.objectives[names[i]] = v;
    }

    // sample optimal lexicons
    for (int k = 0; k < sample_count; ++k) {
        sat::Status st = state.solve(opt.bounds);
        if (st != sat::Status::Sat) break;
        Sample sample;
        sample.lexicon = state.decode_lexicon();
        for (int i = 0; i < state.sentences(); ++i) sample.parses.push_back(state.decode_parse(i));
        sample.items = (int)sample.lexicon.size();
        sample.lexicon_features = count_lexicon_features(sample.lexicon);
        sample.parse_features = count_parse_features(sample.parses);
        sample.distinct_selectors = count_distinct_selectors(sample.lexicon);
        sample.validated = true;
        for (int i = 0; i < state.sentences(); ++i)
            sample.validated = sample.validated && mg::validate(sample.lexicon, state.sentence(i), cfg.bounds);
        result.samples.push_back(std::move(sample));
        state.block_current_lexicon();
    }
    result.conflicts = state.solver().conflicts();
    result.ok = !result.samples.empty();
    if (result.samples.empty()) result.error = "no samples produced";
    return result;
}

std::vector<mg::Lexicon> sample_lexicons(enc::EncoderState& state, int n,
                                         const std::vector<sat::Lit>& assumptions) {
    std::vector<mg::Lexicon> out;
    std::set<std::string> seen;
    for (int k = 0; k < n; ++k) {
        if (state.solve(assumptions) != sat::Status::Sat) break;
        mg::Lexicon lex = state.decode_lexicon();
        std::string key = mg::print_lexicon_text(lex);
        if (seen.insert(key).second) out.push_back(std::move(lex));
        state.block_current_lexicon();
    }
    return out;
}

AblationReport ablate(const std::vector<mg::AnnotatedSentence>& corpus, const enc::Config& cfg,
                      const CostSpec& cost, const std::string& group) {
    AblationReport report;
    report.group = group;
    std::string base = group.substr(0, group.find(':'));
    auto known = enc::axiom_group_names();
    report.known_group = std::find(known.begin(), known.end(), base) != known.end();
    if (!report.known_group) throw std::invalid_argument("unknown axiom group: " + group);

    auto baseline = run(corpus, cfg, cost, 1);
    report.baseline_sat = baseline.ok;
    report.baseline_objectives = baseline.objectives;

    enc::Config ablated_cfg = cfg;
    ablated_cfg.disabled_groups.push_back(group);
    auto ablated = run(corpus, ablated_cfg, cost, 1);
    report.ablated_sat = ablated.ok;
    report.ablated_objectives = ablated.objectives;
    return report;
}

}  // namespace inf
