#include "fpc/surface.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fpc {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
    Ident, Keyword, LParen, RParen, LAngle, RAngle, LBrace, RBrace,
    Comma, Colon, Dot, Bar, Arrow, DArrow, Plus, Star, One, Eq, SemiSemi,
    Hole, End
};

struct Token {
    Tok tok;
    std::string text;
    SourceLoc loc;
};

bool isKeyword(const std::string& s) {
    return s == "fn" || s == "case" || s == "of" || s == "inl" || s == "inr" ||
           s == "fst" || s == "snd" || s == "fold" || s == "unfold" || s == "mu" ||
           s == "let";
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto loc = [&] { return SourceLoc{line, col}; };
    auto advance = [&](size_t n) {
        for (size_t j = 0; j < n; ++j) {
            if (text[i + j] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        SourceLoc l = loc();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                    text[j] == '\''))
                ++j;
            std::string word = text.substr(i, j - i);
            advance(j - i);
            out.push_back({isKeyword(word) ? Tok::Keyword : Tok::Ident, word, l});
            continue;
        }
        if (c == '1' && (i + 1 >= text.size() ||
                         !std::isalnum(static_cast<unsigned char>(text[i + 1])))) {
            advance(1);
            out.push_back({Tok::One, "1", l});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError(l, "unexpected number (only the unit type '1' is numeric)");
        auto two = [&](const char* s) {
            return i + 1 < text.size() && text[i] == s[0] && text[i + 1] == s[1];
        };
        if (two("->")) { advance(2); out.push_back({Tok::Arrow, "->", l}); continue; }
        if (two("=>")) { advance(2); out.push_back({Tok::DArrow, "=>", l}); continue; }
        if (two(";;")) { advance(2); out.push_back({Tok::SemiSemi, ";;", l}); continue; }
        if (c == '[' && i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == ']') {
            advance(3);
            out.push_back({Tok::Hole, "[-]", l});
            continue;
        }
        switch (c) {
        case '(': advance(1); out.push_back({Tok::LParen, "(", l}); continue;
        case ')': advance(1); out.push_back({Tok::RParen, ")", l}); continue;
        case '<': advance(1); out.push_back({Tok::LAngle, "<", l}); continue;
        case '>': advance(1); out.push_back({Tok::RAngle, ">", l}); continue;
        case '{': advance(1); out.push_back({Tok::LBrace, "{", l}); continue;
        case '}': advance(1); out.push_back({Tok::RBrace, "}", l}); continue;
        case ',': advance(1); out.push_back({Tok::Comma, ",", l}); continue;
        case ':': advance(1); out.push_back({Tok::Colon, ":", l}); continue;
        case '.': advance(1); out.push_back({Tok::Dot, ".", l}); continue;
        case '|': advance(1); out.push_back({Tok::Bar, "|", l}); continue;
        case '+': advance(1); out.push_back({Tok::Plus, "+", l}); continue;
        case '*': advance(1); out.push_back({Tok::Star, "*", l}); continue;
        case '=': advance(1); out.push_back({Tok::Eq, "=", l}); continue;
        default:
            throw ParseError(l, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, "", SourceLoc{line, col}});
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    std::vector<Token> ts;
    size_t pos = 0;
    ParseOptions opts;

    const Token& peek() const { return ts[pos]; }
    const Token& next() { return ts[pos++]; }
    bool at(Tok t) const { return ts[pos].tok == t; }
    bool atKw(const char* k) const { return at(Tok::Keyword) && ts[pos].text == k; }
    void expect(Tok t, const char* what) {
        if (!at(t)) throw ParseError(peek().loc, std::string("expected ") + what);
        ++pos;
    }
    void expectKw(const char* k) {
        if (!atKw(k)) throw ParseError(peek().loc, std::string("expected '") + k + "'");
        ++pos;
    }
    std::string ident() {
        if (!at(Tok::Ident)) throw ParseError(peek().loc, "expected identifier");
        return next().text;
    }

    // Types:  arrow < sum < prod < atom; mu body extends maximally right.
    TypePtr type() { return arrowType(); }

    TypePtr arrowType() {
        TypePtr l = sumType();
        if (at(Tok::Arrow)) {
            next();
            return tArrow(l, arrowType());
        }
        return l;
    }
    TypePtr sumType() {
        TypePtr l = prodType();
        while (at(Tok::Plus)) {
            next();
            l = tSum(l, prodType());
        }
        return l;
    }
    TypePtr prodType() {
        TypePtr l = atomType();
        while (at(Tok::Star)) {
            next();
            l = tProd(l, atomType());
        }
        return l;
    }
    TypePtr atomType() {
        if (at(Tok::One)) {
            next();
            return tUnit();
        }
        if (at(Tok::Ident)) return tVar(next().text);
        if (atKw("mu")) {
            next();
            std::string b = ident();
            expect(Tok::Dot, "'.'");
            return tMu(b, type());
        }
        if (at(Tok::LParen)) {
            next();
            TypePtr t = type();
            expect(Tok::RParen, "')'");
            return t;
        }
        throw ParseError(peek().loc, "expected a type");
    }

    // Terms.
    TermPtr term() {
        if (atKw("fn")) {
            next();
            std::string b = ident();
            expect(Tok::Colon, "':'");
            TypePtr dom = type();
            expect(Tok::DArrow, "'=>'");
            return mLam(b, dom, term());
        }
        if (atKw("case")) {
            next();
            TermPtr scrut = term();
            expectKw("of");
            expect(Tok::LBrace, "'{'");
            expectKw("inl");
            std::string x1 = ident();
            expect(Tok::DArrow, "'=>'");
            TermPtr l = term();
            expect(Tok::Bar, "'|'");
            expectKw("inr");
            std::string x2 = ident();
            expect(Tok::DArrow, "'=>'");
            TermPtr r = term();
            expect(Tok::RBrace, "'}'");
            return mCase(scrut, x1, l, x2, r);
        }
        return appTerm();
    }

    bool startsPrefixTerm() const {
        return at(Tok::Ident) || at(Tok::LParen) || at(Tok::LAngle) ||
               (opts.allowHole && at(Tok::Hole)) || atKw("inl") || atKw("inr") ||
               atKw("fst") || atKw("snd") || atKw("fold") || atKw("unfold");
    }

    TermPtr appTerm() {
        TermPtr f = prefixTerm();
        while (startsPrefixTerm()) f = mApp(f, prefixTerm());
        return f;
    }

    TermPtr prefixTerm() {
        if (at(Tok::Keyword)) {
            const std::string& k = peek().text;
            TermPtr (*mk)(TermPtr) = nullptr;
            if (k == "inl") mk = mInl;
            else if (k == "inr") mk = mInr;
            else if (k == "fst") mk = mFst;
            else if (k == "snd") mk = mSnd;
            else if (k == "fold") mk = mFold;
            else if (k == "unfold") mk = mUnfold;
            if (mk) {
                next();
                return mk(prefixTerm());
            }
        }
        return atom();
    }

    TermPtr atom() {
        if (at(Tok::Ident)) return mVar(next().text);
        if (at(Tok::Hole)) {
            if (!opts.allowHole)
                throw ParseError(peek().loc, "hole '[-]' is only allowed in context files");
            next();
            return mHole();
        }
        if (at(Tok::LAngle)) {
            next();
            TermPtr l = term();
            expect(Tok::Comma, "','");
            TermPtr r = term();
            expect(Tok::RAngle, "'>'");
            return mPair(l, r);
        }
        if (at(Tok::LParen)) {
            next();
            if (at(Tok::RParen)) {
                next();
                return mUnit();
            }
            TermPtr m = term();
            if (at(Tok::Colon)) {
                next();
                TypePtr t = type();
                expect(Tok::RParen, "')'");
                return mAscribe(m, t);
            }
            expect(Tok::RParen, "')'");
            return m;
        }
        throw ParseError(peek().loc, "expected a term");
    }

    SourceFile program() {
        SourceFile f;
        while (atKw("let")) {
            next();
            std::string name = ident();
            expect(Tok::Eq, "'='");
            TermPtr body = term();
            expect(Tok::SemiSemi, "';;'");
            f.defs.emplace_back(std::move(name), std::move(body));
        }
        if (!at(Tok::End)) {
            f.bare = term();
            if (at(Tok::SemiSemi)) next();
        }
        if (!at(Tok::End)) throw ParseError(peek().loc, "trailing input after program");
        return f;
    }
};

} // namespace

TermPtr parseTerm(const std::string& text, ParseOptions opts) {
    Parser p{lex(text), 0, opts};
    TermPtr m = p.term();
    if (!p.at(Tok::End)) throw ParseError(p.peek().loc, "trailing input after term");
    return m;
}

TypePtr parseType(const std::string& text) {
    Parser p{lex(text), 0, {}};
    TypePtr t = p.type();
    if (!p.at(Tok::End)) throw ParseError(p.peek().loc, "trailing input after type");
    return t;
}

SourceFile parseProgram(const std::string& text, ParseOptions opts) {
    Parser p{lex(text), 0, opts};
    SourceFile f = p.program();
    f.text = text;
    return f;
}

SourceFile loadFile(const std::string& path, ParseOptions opts) {
    std::ifstream in(path);
    if (!in) throw ParseError(SourceLoc{0, 0}, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    SourceFile f = parseProgram(ss.str(), opts);
    f.path = path;
    return f;
}

TermPtr expandProgram(const SourceFile& f) {
    std::vector<std::pair<std::string, TermPtr>> expanded;
    auto substAll = [&](TermPtr m) {
        for (auto it = expanded.rbegin(); it != expanded.rend(); ++it)
            m = substTermInTerm(m, it->second, it->first);
        return m;
    };
    TermPtr main;
    for (auto& [name, body] : f.defs) {
        TermPtr b = substAll(body);
        if (name == "main") main = b;
        expanded.emplace_back(name, b);
    }
    if (f.bare) return substAll(f.bare);
    if (!main)
        throw ParseError(SourceLoc{0, 0},
                         "program has no bare term and no 'main' definition");
    return main;
}

// ---------------------------------------------------------------------------
// Printer.  Term levels: 0 body, 2 app head, 3 app arg / prefix arg chain,
// 4 atom.  Type levels: 0 mu body, 1 arrow, 2 sum, 3 prod, 4 atom.
// ---------------------------------------------------------------------------

namespace {

void printTy(std::ostringstream& o, const TypePtr& t, int prec) {
    auto wrap = [&](int mine, auto body) {
        if (prec > mine) o << '(';
        body();
        if (prec > mine) o << ')';
    };
    switch (t->kind) {
    case TypeKind::Var:
        o << t->name;
        return;
    case TypeKind::Unit:
        o << '1';
        return;
    case TypeKind::Arrow:
        wrap(1, [&] {
            printTy(o, t->lhs, 2);
            o << " -> ";
            printTy(o, t->rhs, 1);
        });
        return;
    case TypeKind::Sum:
        wrap(2, [&] {
            printTy(o, t->lhs, 2);
            o << " + ";
            printTy(o, t->rhs, 3);
        });
        return;
    case TypeKind::Prod:
        wrap(3, [&] {
            printTy(o, t->lhs, 3);
            o << " * ";
            printTy(o, t->rhs, 4);
        });
        return;
    case TypeKind::Mu:
        wrap(0, [&] {
            o << "mu " << t->name << ". ";
            printTy(o, t->rhs, 0);
        });
        return;
    }
}

void printTm(std::ostringstream& o, const TermPtr& m, int prec) {
    auto wrap = [&](int mine, auto body) {
        if (prec > mine) o << '(';
        body();
        if (prec > mine) o << ')';
    };
    switch (m->kind) {
    case TermKind::Var:
        o << m->name;
        return;
    case TermKind::UnitVal:
        o << "()";
        return;
    case TermKind::Hole:
        o << "[-]";
        return;
    case TermKind::Pair:
        o << '<';
        printTm(o, m->a, 0);
        o << ", ";
        printTm(o, m->b, 0);
        o << '>';
        return;
    case TermKind::Lam:
        wrap(0, [&] {
            o << "fn " << m->name << " : ";
            printTy(o, m->annot, 0);
            o << " => ";
            printTm(o, m->a, 0);
        });
        return;
    case TermKind::Case:
        wrap(0, [&] {
            o << "case ";
            printTm(o, m->a, 0);
            o << " of { inl " << m->name << " => ";
            printTm(o, m->b, 0);
            o << " | inr " << m->name2 << " => ";
            printTm(o, m->c, 0);
            o << " }";
        });
        return;
    case TermKind::App:
        wrap(2, [&] {
            printTm(o, m->a, 2);
            o << ' ';
            printTm(o, m->b, 3);
        });
        return;
    case TermKind::Ascribe:
        o << '(';
        printTm(o, m->a, 0);
        o << " : ";
        printTy(o, m->annot, 0);
        o << ')';
        return;
    case TermKind::Fst:
    case TermKind::Snd:
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::Fold:
    case TermKind::Unfold: {
        const char* kw = m->kind == TermKind::Fst      ? "fst"
                         : m->kind == TermKind::Snd    ? "snd"
                         : m->kind == TermKind::Inl    ? "inl"
                         : m->kind == TermKind::Inr    ? "inr"
                         : m->kind == TermKind::Fold   ? "fold"
                                                       : "unfold";
        wrap(3, [&] {
            o << kw << ' ';
            printTm(o, m->a, 4);
        });
        return;
    }
    }
}

} // namespace

std::string printType(const TypePtr& t) {
    std::ostringstream o;
    printTy(o, t, 0);
    return o.str();
}

std::string printTerm(const TermPtr& m) {
    std::ostringstream o;
    printTm(o, m, 0);
    return o.str();
}

} // namespace fpc
