#ifndef FPC_SURFACE_HPP
#define FPC_SURFACE_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpc/syntax.hpp"

namespace fpc {

struct SourceLoc {
    int line = 0;
    int col = 0;
    std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

struct ParseError : std::runtime_error {
    SourceLoc loc;
    ParseError(SourceLoc l, const std::string& msg)
        : std::runtime_error(l.str() + ": " + msg), loc(l) {}
};

struct ParseOptions {
    bool allowHole = false;  // accept `[-]` (context files)
};

TermPtr parseTerm(const std::string& text, ParseOptions opts = {});
TypePtr parseType(const std::string& text);

std::string printTerm(const TermPtr& m);
std::string printType(const TypePtr& t);

// A .fpc file: zero or more `let name = term;;` abbreviations followed by an
// optional bare term.  Abbreviations are non-recursive and expanded textually
// before typechecking; when there is no bare term, `main` must be defined.
struct SourceFile {
    std::string path;
    std::string text;
    std::vector<std::pair<std::string, TermPtr>> defs;  // in order, unexpanded
    TermPtr bare;                                       // may be null
};

SourceFile parseProgram(const std::string& text, ParseOptions opts = {});
SourceFile loadFile(const std::string& path, ParseOptions opts = {});

/// Expand the abbreviations and return the distinguished main term.
TermPtr expandProgram(const SourceFile& f);

} // namespace fpc

#endif
