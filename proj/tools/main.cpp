#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rowhorn/engine.hpp"
#include "rowhorn/infer.hpp"
#include "rowhorn/parser.hpp"

namespace {

// Exit codes: 0 success, 1 query failure / budget exhaustion, 2 I/O,
// 3 syntax error, 4 kind error, 5 type error.
constexpr int kExitFailure = 1;
constexpr int kExitIo = 2;
constexpr int kExitSyntax = 3;
constexpr int kExitKind = 4;
constexpr int kExitType = 5;

struct Report {
    enum class Outcome { Success, Failure, BudgetExceeded, Error };

    Outcome outcome;
    std::string payload;  // printed type, printed solutions, or error text
    int exit_code;        // 0 iff outcome is Success

    static Report success(std::string payload) {
        return Report{Outcome::Success, std::move(payload), 0};
    }
    static Report failure(std::string payload) {
        return Report{Outcome::Failure, std::move(payload), kExitFailure};
    }
    static Report budget(std::string payload) {
        return Report{Outcome::BudgetExceeded, std::move(payload), kExitFailure};
    }
    static Report error(std::string payload, int code) {
        return Report{Outcome::Error, std::move(payload), code};
    }
};

int emit(const Report& report) {
    if (report.outcome == Report::Outcome::Error)
        std::cerr << report.payload << "\n";
    else
        std::cout << report.payload << "\n";
    return report.exit_code;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// NAME:KIND declarations for the kind environment.
std::optional<Report> apply_declares(const std::vector<std::string>& declares,
                                     rowhorn::KindEnv& kinds) {
    for (const auto& d : declares) {
        auto colon = d.find(':');
        if (colon == std::string::npos || colon == 0)
            return Report::error("kind error: --declare expects NAME:KIND, got '" + d + "'",
                                 kExitKind);
        std::string name = d.substr(0, colon);
        try {
            kinds.constructors.insert_or_assign(name, rowhorn::parse_kind(d.substr(colon + 1)));
        } catch (const std::invalid_argument& e) {
            return Report::error(std::string("kind error: ") + e.what(), kExitKind);
        }
    }
    return std::nullopt;
}

Report cmd_check(const std::string& path, const std::vector<std::string>& declares) {
    rowhorn::KindEnv kinds = rowhorn::KindEnv::builtins();
    if (auto bad = apply_declares(declares, kinds))
        return *bad;

    auto text = read_file(path);
    if (!text)
        return Report::error("io error: cannot read '" + path + "'", kExitIo);

    rowhorn::MLPtr term;
    try {
        term = rowhorn::parse_ml(*text);
    } catch (const rowhorn::ParseError& e) {
        return Report::error(e.what(), kExitSyntax);
    }

    rowhorn::VarGen gen;
    rowhorn::TypeEnv env;
    try {
        auto [subst, type] = rowhorn::infer(kinds, env, term, gen);
        rowhorn::Scheme scheme = rowhorn::generalize(env, type);
        return Report::success(rowhorn::print_scheme(scheme));
    } catch (const rowhorn::InferError& e) {
        if (e.variant == rowhorn::InferError::Variant::KindMismatch)
            return Report::error("kind error: " + e.to_string(), kExitKind);
        return Report::error("type error: " + e.to_string(), kExitType);
    } catch (const rowhorn::KindError& e) {
        return Report::error("kind error: " + e.message, kExitKind);
    }
}

struct QueryOptions {
    std::string goal;
    bool coinductive = false;
    int depth = 10000;
    std::uint64_t max_solutions = 1;
    bool trace = false;
};

Report cmd_query(const std::string& path, const QueryOptions& opt) {
    auto text = read_file(path);
    if (!text)
        return Report::error("io error: cannot read '" + path + "'", kExitIo);

    rowhorn::VarGen gen;
    rowhorn::Program program;
    std::vector<rowhorn::Atom> goal;
    try {
        program = rowhorn::parse_program(*text, gen);
        goal = rowhorn::parse_goal(opt.goal, gen);
    } catch (const rowhorn::ParseError& e) {
        return Report::error(e.what(), kExitSyntax);
    }

    rowhorn::EngineConfig config;
    config.mode = opt.coinductive ? rowhorn::EngineConfig::Mode::Coinductive
                                  : rowhorn::EngineConfig::Mode::Inductive;
    config.depth_limit = opt.depth;
    config.max_solutions = opt.max_solutions;
    config.trace = opt.trace;

    rowhorn::TraceSink sink;
    if (opt.trace)
        sink = [](const std::string& line) { std::cout << line << "\n"; };

    std::vector<rowhorn::TermPtr> query_vars = rowhorn::goal_vars(goal);
    auto stream = rowhorn::solve(program, std::move(goal), config, gen, sink);
    std::vector<rowhorn::Solution> solutions = stream.collect();

    if (solutions.empty()) {
        if (stream.budget_exceeded())
            return Report::budget("unknown (budget exceeded)");
        return Report::failure("no");
    }

    std::ostringstream out;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        if (i)
            out << " ; ";
        const auto& sol = solutions[i];
        bool printed = false;
        for (const auto& qv : query_vars) {
            if (!sol.bindings.contains(qv->as_var().id))
                continue;
            if (printed)
                out << ", ";
            out << qv->as_var().hint << " = " << rowhorn::print_term(qv, sol.bindings);
            printed = true;
        }
        if (!printed)
            out << (sol.coinductive ? "yes (coinductive)" : "yes");
    }
    return Report::success(out.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rowhorn: a Horn-clause engine with coinductive resolution and a "
                 "row-polymorphic type checker for a mini-ML"};
    app.require_subcommand(1);

    std::string check_path;
    std::vector<std::string> declares;
    auto* check = app.add_subcommand("check", "Infer the principal type of an .ml1 file");
    check->add_option("file", check_path, "expression file")->required();
    check->add_option("--declare", declares, "extra type constructor NAME:KIND (repeatable)");

    std::string query_path;
    QueryOptions qopt;
    auto* query = app.add_subcommand("query", "Run a goal against an .lp program");
    query->add_option("file", query_path, "clause file")->required();
    query->add_option("--goal", qopt.goal, "goal atoms")->required();
    query->add_flag("--coinductive", qopt.coinductive, "coinductive resolution");
    query->add_option("--depth", qopt.depth, "resolution step budget per branch")
        ->check(CLI::PositiveNumber);
    query->add_option("--max-solutions", qopt.max_solutions, "answers to produce")
        ->check(CLI::PositiveNumber);
    query->add_flag("--trace", qopt.trace, "print one line per resolution step");

    CLI11_PARSE(app, argc, argv);

    if (check->parsed())
        return emit(cmd_check(check_path, declares));
    return emit(cmd_query(query_path, qopt));
}
