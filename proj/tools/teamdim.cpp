#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <teamdim/dimension.hpp>
#include <teamdim/error.hpp>
#include <teamdim/formula.hpp>
#include <teamdim/harness.hpp>
#include <teamdim/semantics.hpp>
#include <teamdim/setfam.hpp>
#include <teamdim/transforms.hpp>

namespace {

using namespace teamdim;

// --family accepts either a path or the literal itself; a readable file wins
std::string family_text(const std::string& arg) {
    std::ifstream in(arg);
    if (!in.good()) return arg;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

DimensionKind kind_from_flag(const std::string& s) {
    if (s == "cyl") return DimensionKind::cylindrical;
    if (s == "inter") return DimensionKind::intersection;
    return dimension_kind_from_string(s);
}

// caps for interactive evaluation; TEAMDIM_MAX_SCOPE widens or narrows the
// property sweep (the library itself never reads the environment)
std::size_t env_max_scope(std::size_t fallback) {
    const char* v = std::getenv("TEAMDIM_MAX_SCOPE");
    if (!v || !*v) return fallback;
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (end == v || *end || n < 1 || n > 6)
        throw DomainError("TEAMDIM_MAX_SCOPE must be an integer in 1..6");
    return static_cast<std::size_t>(n);
}

EvalOptions eval_options_from_env() {
    EvalOptions eo;
    eo.max_property_scope = env_max_scope(eo.max_property_scope);
    return eo;
}

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int run_dim(const std::string& family_arg, const std::string& kind_arg, bool exact, bool json) {
    SetFamily fam = parse_family(family_text(family_arg));
    DimensionOptions opt;
    opt.force_exact = exact;
    DimensionReport rep = compute_dimension(fam, kind_from_flag(kind_arg), opt);
    if (json) {
        std::cout << report_to_json(rep) << "\n";
        return 0;
    }
    std::cout << to_string(rep.kind) << " dimension: " << rep.value << "\n";
    if (!rep.witness.empty()) {
        std::cout << "witness:";
        for (Mask m : rep.witness) std::cout << " " << groundset_to_text(fam.base(), m);
        std::cout << "\n";
    }
    for (auto [a, b] : rep.intervals)
        std::cout << "interval: [" << groundset_to_text(fam.base(), a) << ", "
                  << groundset_to_text(fam.base(), b) << "]\n";
    std::cout << "path: " << (rep.path == DimensionPath::fast_closed_form ? "closed form"
                                                                          : "exact cover");
    if (!rep.path_detail.empty()) std::cout << " (" << rep.path_detail << ")";
    std::cout << "\n";
    return 0;
}

int run_eval(const std::string& team_arg, const std::string& formula_arg, bool json) {
    std::size_t first = team_arg.find_first_not_of(" \t\n");
    bool looks_json = first != std::string::npos && team_arg[first] == '{';
    Team t = looks_json ? team_from_json(team_arg) : parse_team(team_arg);
    Formula f = parse_formula(formula_arg);
    EvalOptions eo = eval_options_from_env();
    bool sat = satisfies(t, f, eo);
    if (json) {
        nlohmann::json out{{"team", nlohmann::json::parse(team_to_json(t))},
                           {"formula", render_formula(f)},
                           {"satisfies", sat}};
        std::cout << out.dump() << "\n";
    } else {
        std::cout << (sat ? "satisfied" : "not satisfied") << "\n";
    }
    return sat ? 0 : 1;
}

int run_property(const std::string& formula_arg, const std::string& scope_csv, bool json) {
    Formula f = parse_formula(formula_arg);
    Scope sc = scope_csv.empty() ? scope_of(f) : make_scope(split_names(scope_csv));
    EvalOptions eo = eval_options_from_env();
    TeamProperty prop = team_property(f, sc, eo);
    if (json) {
        nlohmann::json out{{"scope", sc.vars},
                           {"family", nlohmann::json::parse(family_to_json(prop.family))}};
        std::cout << out.dump() << "\n";
        return 0;
    }
    std::cout << prop.family.size() << " satisfying teams over";
    for (const std::string& v : sc.vars) std::cout << " " << v;
    std::cout << "\n" << family_to_text(prop.family) << "\n";
    return 0;
}

int run_equiv(const std::string& lhs, const std::string& rhs, bool json) {
    Formula f = parse_formula(lhs), g = parse_formula(rhs);
    EvalOptions eo = eval_options_from_env();
    EquivalenceResult r = check_equivalent(f, g, eo);
    if (json) {
        nlohmann::json out{{"equivalent", r.equivalent}};
        if (!r.equivalent) {
            out["counterexample"] = nlohmann::json::parse(team_to_json(r.counterexample));
            out["lhs"] = r.lhs;
            out["rhs"] = r.rhs;
        }
        std::cout << out.dump() << "\n";
    } else if (r.equivalent) {
        std::cout << "equivalent\n";
    } else {
        std::cout << "not equivalent; separating team " << team_to_text(r.counterexample)
                  << " satisfies " << (r.lhs ? "only the first" : "only the second")
                  << " formula\n";
    }
    return r.equivalent ? 0 : 1;
}

int run_reduce(const std::string& rule_arg, const std::string& formula_arg, int max_steps) {
    static const RuleId all_rules[] = {
        RuleId::reduce_dep,     RuleId::reduce_anon,     RuleId::reduce_indep_conditional,
        RuleId::reduce_indep,   RuleId::inc_to_anon,     RuleId::anon_to_inc,
        RuleId::exc_to_dep,     RuleId::dep_to_exc,      RuleId::reduce_inc_qpl,
        RuleId::reduce_exc_qpl, RuleId::reduce_relativized, RuleId::anon_via_nonconst,
        RuleId::inc_via_primitive, RuleId::eliminate_extended};
    RuleId rule = RuleId::reduce_dep;
    bool found = false;
    for (RuleId r : all_rules)
        if (to_string(r) == rule_arg) {
            rule = r;
            found = true;
        }
    if (!found) {
        std::string known;
        for (RuleId r : all_rules) known += (known.empty() ? "" : ", ") + to_string(r);
        throw DomainError("unknown rule '" + rule_arg + "'; known rules: " + known);
    }
    Formula f = parse_formula(formula_arg);
    ReductionTrail trail = apply_rule(f, rule, max_steps);
    for (const ReductionStep& s : trail.steps) {
        nlohmann::json line{{"rule", to_string(s.rule)},
                            {"atom", to_string(s.tag)},
                            {"input", render_formula(s.input)},
                            {"output", render_formula(s.output)},
                            {"atom_count_delta", s.atom_count_delta},
                            {"arity_delta", s.arity_delta}};
        std::cout << line.dump() << "\n";
    }
    nlohmann::json done{{"result", render_formula(trail.result)},
                        {"steps", trail.steps.size()}};
    std::cout << done.dump() << "\n";
    return 0;
}

int run_verify(const std::string& suite, unsigned seed, bool json) {
    HarnessOptions opt;
    opt.seed = seed;
    opt.max_scope = env_max_scope(opt.max_scope);
    std::vector<VerificationRecord> records = run_suite(suite, opt);
    if (json) {
        std::cout << records_to_json(records) << "\n";
    } else {
        for (const VerificationRecord& r : records) std::cout << record_to_line(r) << "\n";
    }
    std::size_t failed = 0;
    for (const VerificationRecord& r : records)
        if (!r.pass) ++failed;
    if (!json)
        std::cout << records.size() << " checks, " << failed << " failing\n";
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"team semantics, set family dimensions, and the verification suites"};
    app.require_subcommand(1);

    std::string family_arg, kind_arg = "upper";
    bool dim_exact = false, dim_json = false;
    CLI::App* dim = app.add_subcommand("dim", "dimension of a set family");
    dim->add_option("--family", family_arg, "family literal or path to one")->required();
    dim->add_option("--kind", kind_arg, "upper|dual|cyl|union|inter");
    dim->add_flag("--exact", dim_exact, "skip closed-form dispatch");
    dim->add_flag("--json", dim_json, "full report as JSON");

    std::string team_arg, eval_formula;
    bool eval_json = false;
    CLI::App* ev = app.add_subcommand("eval", "team satisfaction");
    ev->add_option("--team", team_arg, "team literal, text or JSON")->required();
    ev->add_option("--formula", eval_formula, "formula text")->required();
    ev->add_flag("--json", eval_json);

    std::string prop_formula, prop_scope;
    bool prop_json = false;
    CLI::App* pr = app.add_subcommand("property", "all satisfying teams over a scope");
    pr->add_option("--formula", prop_formula, "formula text")->required();
    pr->add_option("--scope", prop_scope, "comma separated variables; default free variables");
    pr->add_flag("--json", prop_json);

    std::vector<std::string> equiv_args;
    bool equiv_json = false;
    CLI::App* eq = app.add_subcommand("equiv", "equivalence over the shared free variables");
    eq->add_option("formulas", equiv_args, "two formulas")->expected(2);
    eq->add_flag("--json", equiv_json);

    std::string rule_arg, reduce_formula;
    int max_steps = -1;
    CLI::App* red = app.add_subcommand("reduce", "apply a rewrite rule, one atom at a time");
    red->add_option("--rule", rule_arg, "rule name, e.g. reduce_dep")->required();
    red->add_option("--formula", reduce_formula, "formula text")->required();
    red->add_option("--max-steps", max_steps, "stop after this many rewrites");

    std::string suite = "all";
    unsigned seed = HarnessOptions{}.seed;
    bool verify_json = false;
    CLI::App* ver = app.add_subcommand("verify", "run the verification suites");
    ver->add_option("--suite", suite, "all|atoms|dual|bounds|gaps|probes");
    ver->add_option("--seed", seed, "seed for the randomized probes");
    ver->add_flag("--json", verify_json);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*dim) return run_dim(family_arg, kind_arg, dim_exact, dim_json);
        if (*ev) return run_eval(team_arg, eval_formula, eval_json);
        if (*pr) return run_property(prop_formula, prop_scope, prop_json);
        if (*eq) return run_equiv(equiv_args[0], equiv_args[1], equiv_json);
        if (*red) return run_reduce(rule_arg, reduce_formula, max_steps);
        if (*ver) return run_verify(suite, seed, verify_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
