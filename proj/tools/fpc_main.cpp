#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fpc/meta.hpp"
#include "fpc/surface.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTimeout = 3;

struct Loaded {
    fpc::TermPtr term;      // expanded, ascriptions intact
    fpc::CorePtr core;      // elaborated
    fpc::TermPtr runnable;  // ascription-free, for the operational semantics
    fpc::TypePtr type;
};

Loaded loadChecked(const std::string& path) {
    fpc::SourceFile f = fpc::loadFile(path);
    Loaded l;
    l.term = fpc::expandProgram(f);
    l.core = fpc::elaborate({}, l.term);
    l.runnable = fpc::eraseCore(l.core);
    l.type = l.core->type;
    return l;
}

bool isBoolType(const fpc::TypePtr& t) {
    return t->kind == fpc::TypeKind::Sum && t->lhs->kind == fpc::TypeKind::Unit &&
           t->rhs->kind == fpc::TypeKind::Unit;
}

std::vector<fpc::NamedContext> loadContexts(const std::string& dir) {
    std::vector<fpc::NamedContext> out;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".fpc") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        fpc::ParseOptions opts;
        opts.allowHole = true;
        fpc::SourceFile f = fpc::loadFile(p.string(), opts);
        out.push_back({p.filename().string(), fpc::expandProgram(f)});
    }
    return out;
}

int cmdCheck(const std::string& file, bool asJson) {
    Loaded l = loadChecked(file);
    if (asJson) {
        json j;
        j["command"] = "check";
        j["type"] = fpc::printType(l.type);
        std::cout << j.dump() << "\n";
    } else {
        std::cout << fpc::printType(l.type) << "\n";
    }
    return kExitOk;
}

int cmdRun(const std::string& file, long fuel, bool wantTrace, bool asJson) {
    Loaded l = loadChecked(file);
    fpc::Trace trace;
    fpc::RunResult r = fpc::evalSmall(l.runnable, fuel, wantTrace ? &trace : nullptr);
    if (asJson) {
        json j;
        j["command"] = "run";
        if (r.converged()) {
            j["verdict"] = "value";
            j["value"] = fpc::printTerm(r.value);
            j["k"] = r.k;
        } else {
            j["verdict"] = r.status == fpc::RunResult::Status::Timeout ? "timeout" : "stuck";
            j["consumed"] = r.consumed;
        }
        if (wantTrace) j["trace"] = json::parse(fpc::traceToJson(trace));
        std::cout << j.dump() << "\n";
    } else {
        if (wantTrace) std::cout << fpc::traceToText(trace);
        if (r.converged()) {
            std::cout << fpc::printTerm(r.value) << "\nk=" << r.k << "\n";
        } else if (r.status == fpc::RunResult::Status::Timeout) {
            std::cout << "Timeout after " << r.consumed << " reductions\n";
        } else {
            std::cout << "Stuck: " << r.reason << "\n";
        }
    }
    if (r.converged()) return kExitOk;
    return r.status == fpc::RunResult::Status::Timeout ? kExitTimeout : kExitCheckFailed;
}

int cmdDenote(const std::string& file, long fuel, bool asJson) {
    Loaded l = loadChecked(file);
    fpc::Observation o;
    if (l.type->kind == fpc::TypeKind::Unit) {
        o = fpc::observeUnit(fpc::denote(l.core), fuel);
    } else if (isBoolType(l.type)) {
        o = fpc::observeBool(fpc::denote(l.core), fuel);
    } else {
        std::cerr << "denote needs a program of type 1 or 1 + 1, got "
                  << fpc::printType(l.type) << "\n";
        return kExitUsage;
    }
    if (asJson) {
        std::cout << fpc::observationToJson(o) << "\n";
    } else if (o.converged) {
        std::cout << "steps=" << o.steps;
        if (o.left.has_value()) std::cout << " side=" << (*o.left ? "inl" : "inr");
        std::cout << "\n";
    } else {
        std::cout << "Timeout at fuel " << o.fuel << "\n";
    }
    return o.converged ? kExitOk : kExitTimeout;
}

int cmdAdequacy(const std::string& file, long fuel, bool asJson) {
    Loaded l = loadChecked(file);
    if (l.type->kind != fpc::TypeKind::Unit && !isBoolType(l.type)) {
        std::cerr << "adequacy needs a program of type 1 or 1 + 1, got "
                  << fpc::printType(l.type) << "\n";
        return kExitUsage;
    }
    fpc::RunResult op = fpc::evalBig(l.runnable, fuel);
    fpc::Observation de = l.type->kind == fpc::TypeKind::Unit
                              ? fpc::observeUnit(fpc::denote(l.core), fuel)
                              : fpc::observeBool(fpc::denote(l.core), fuel);
    bool bothConverged = op.converged() && de.converged;
    bool bothTimeout = !op.converged() && !de.converged;
    bool match = (bothConverged && op.k == de.steps) || bothTimeout;
    if (asJson) {
        json j;
        j["command"] = "adequacy";
        j["operational"] =
            op.converged() ? json{{"k", op.k}} : json{{"verdict", "timeout"}};
        j["denotational"] =
            de.converged ? json{{"steps", de.steps}} : json{{"verdict", "timeout"}};
        j["match"] = match;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "operational "
                  << (op.converged() ? "k=" + std::to_string(op.k) : "Timeout")
                  << ", denotational "
                  << (de.converged ? "steps=" + std::to_string(de.steps) : "Timeout") << ", "
                  << (match ? "MATCH" : "MISMATCH") << "\n";
    }
    if (bothTimeout) return kExitTimeout;
    return match ? kExitOk : kExitCheckFailed;
}

int cmdBisim(const std::string& f1, const std::string& f2, int depth, bool asJson) {
    Loaded a = loadChecked(f1);
    Loaded b = loadChecked(f2);
    if (!fpc::alphaEq(a.type, b.type)) {
        std::cerr << "programs have different types: " << fpc::printType(a.type) << " vs "
                  << fpc::printType(b.type) << "\n";
        return kExitUsage;
    }
    fpc::Verdict v = fpc::bisim(a.type, fpc::denote(a.core), fpc::denote(b.core), depth);
    fpc::CheckReport rep{"bisim", fpc::printType(a.type), depth, v};
    if (asJson) {
        std::cout << fpc::checkReportToJson(rep) << "\n";
    } else {
        std::cout << (v.holds ? "HoldsAt(" : "FailsAt(") << depth << ")";
        if (!v.holds) std::cout << " at " << v.path << " (fails within this depth)";
        std::cout << "\n";
    }
    return v.holds ? kExitOk : kExitCheckFailed;
}

int cmdExec(const std::string& file, long fuel, bool asJson) {
    Loaded l = loadChecked(file);
    if (!isBoolType(l.type)) {
        std::cerr << "exec needs a program of type 1 + 1, got " << fpc::printType(l.type)
                  << "\n";
        return kExitUsage;
    }
    fpc::ExecResult r = fpc::exec(fuel, fpc::denote(l.core).asSum());
    if (asJson) {
        json j;
        j["command"] = "exec";
        j["verdict"] = r.done ? "done" : "more";
        if (r.done) j["side"] = r.left ? "inl" : "inr";
        std::cout << j.dump() << "\n";
    } else if (r.done) {
        std::cout << (r.left ? "inl (true)" : "inr (false)") << "\n";
    } else {
        std::cout << "More (not yet decided)\n";
    }
    return r.done ? kExitOk : kExitTimeout;
}

int cmdCtxEquiv(const std::string& f1, const std::string& f2, const std::string& ctxDir,
                long fuel, bool asJson) {
    Loaded a = loadChecked(f1);
    Loaded b = loadChecked(f2);
    if (!fpc::alphaEq(a.type, b.type)) {
        std::cerr << "programs have different types: " << fpc::printType(a.type) << " vs "
                  << fpc::printType(b.type) << "\n";
        return kExitUsage;
    }
    auto contexts = loadContexts(ctxDir);
    std::vector<fpc::NamedContext> usable;
    for (auto& c : contexts)
        if (fpc::ctxCheck(c.ctx, {}, a.type, {}, fpc::tUnit())) usable.push_back(c);
    fpc::CtxReport rep = fpc::ctxEquivSuite(a.term, b.term, usable, fuel);
    if (asJson) {
        json j;
        j["command"] = "ctx-equiv";
        j["contexts"] = json::array();
        for (const auto& row : rep.rows) {
            json r;
            r["name"] = row.name;
            r["m"] = row.mConverged ? json{{"k", row.mk}} : json{{"verdict", "timeout"}};
            r["n"] = row.nConverged ? json{{"k", row.nk}} : json{{"verdict", "timeout"}};
            r["status"] = row.agree ? "agree" : "unknown";
            j["contexts"].push_back(std::move(r));
        }
        j["allAgree"] = rep.allAgree;
        std::cout << j.dump() << "\n";
    } else {
        for (const auto& row : rep.rows) {
            std::cout << row.name << ": ";
            if (row.agree)
                std::cout << "agree (k=" << row.mk << " vs k=" << row.nk << ")";
            else
                std::cout << "unknown (timeout)";
            std::cout << "\n";
        }
        std::cout << (contexts.size() - usable.size()) << " context(s) skipped by typing, "
                  << rep.rows.size() << " run\n";
    }
    if (!rep.allAgree) return kExitTimeout;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FPC toolchain: step-counted evaluation and intensional denotations"};
    app.require_subcommand(1);

    if (const char* seed = std::getenv("FPC_SEED")) {
        fpc::setFreshSeed(static_cast<unsigned>(std::strtoul(seed, nullptr, 10)));
    }

    bool asJson = false;
    app.add_flag("--json", asJson, "emit JSON instead of text");

    std::string file, file2, ctxDir;
    long fuel = 10000;
    int depth = 50;
    bool wantTrace = false;

    auto* check = app.add_subcommand("check", "parse and typecheck, print the type");
    check->add_option("file", file)->required();

    auto* run = app.add_subcommand("run", "evaluate and print value and k");
    run->add_option("file", file)->required();
    run->add_option("--fuel", fuel);
    run->add_flag("--trace", wantTrace, "print the reduction trace");

    auto* den = app.add_subcommand("denote", "observe the denotation at ground type");
    den->add_option("file", file)->required();
    den->add_option("--fuel", fuel);

    auto* adq = app.add_subcommand("adequacy", "compare operational k with denotational steps");
    adq->add_option("file", file)->required();
    adq->add_option("--fuel", fuel);

    auto* bis = app.add_subcommand("bisim", "weak bisimulation of two programs' denotations");
    bis->add_option("file1", file)->required();
    bis->add_option("file2", file2)->required();
    bis->add_option("--depth", depth);

    auto* exe = app.add_subcommand("exec", "run a Bool denotation with a time-out");
    exe->add_option("file", file)->required();
    exe->add_option("--fuel", fuel);

    auto* ctx = app.add_subcommand("ctx-equiv", "contextual agreement over a context suite");
    ctx->add_option("file1", file)->required();
    ctx->add_option("file2", file2)->required();
    ctx->add_option("--contexts", ctxDir)->required();
    ctx->add_option("--fuel", fuel);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (check->parsed()) return cmdCheck(file, asJson);
        if (run->parsed()) return cmdRun(file, fuel, wantTrace, asJson);
        if (den->parsed()) return cmdDenote(file, fuel, asJson);
        if (adq->parsed()) return cmdAdequacy(file, fuel, asJson);
        if (bis->parsed()) return cmdBisim(file, file2, depth, asJson);
        if (exe->parsed()) return cmdExec(file, fuel, asJson);
        if (ctx->parsed()) return cmdCtxEquiv(file, file2, ctxDir, fuel, asJson);
    } catch (const fpc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fpc::TypeError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
