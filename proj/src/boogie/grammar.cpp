// Recursive-descent parser for the Boogie subset the exporter emits.

#include <array>
#include <cctype>

#include "mbc/boogie/boogie.hpp"

namespace mbc::boogie {

namespace {

struct Token {
    enum Kind { ident, number, symbol, end } kind;
    std::string text;
    int line;
};

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$' || c == '#' || c == '\'' ||
           c == '~' || c == '^' || c == '?' || c == '.';
}

bool ident_char(char c)
{
    return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) != 0;
}

struct ParseError {
    std::string message;
};

std::vector<Token> lex(std::string_view s)
{
    static constexpr std::array<std::string_view, 15> multi{"<==>", "==>", "::", ":=", "==", "!=", "<=", ">=",
                                                            "&&", "||", "<:", "++", "!", "<", ">"};
    std::vector<Token> out;
    int line = 1;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            ++i;
        }
        else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
        }
        else if (s.substr(i, 2) == "//") {
            while (i < s.size() && s[i] != '\n') {
                ++i;
            }
        }
        else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])) != 0) {
                ++j;
            }
            out.push_back({Token::number, std::string(s.substr(i, j - i)), line});
            i = j;
        }
        else if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) {
                ++j;
            }
            out.push_back({Token::ident, std::string(s.substr(i, j - i)), line});
            i = j;
        }
        else {
            std::string_view sym;
            for (auto m : multi) {
                if (s.substr(i, m.size()) == m) {
                    sym = m;
                    break;
                }
            }
            if (sym.empty()) {
                if (std::string_view("()[]{},;:=+-*").find(c) == std::string_view::npos) {
                    throw ParseError{"line " + std::to_string(line) + ": unexpected character '" + std::string(1, c) +
                                     "'"};
                }
                sym = s.substr(i, 1);
            }
            out.push_back({Token::symbol, std::string(sym), line});
            i += sym.size();
        }
    }
    out.push_back({Token::end, "", line});
    return out;
}

bool keyword(std::string_view s)
{
    return s == "type" || s == "function" || s == "axiom" || s == "returns" || s == "forall" || s == "exists" ||
           s == "if" || s == "then" || s == "else" || s == "true" || s == "false";
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : t_(std::move(tokens)) {}

    void program()
    {
        while (peek().kind != Token::end) {
            declaration();
        }
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return t_[std::min(pos_ + ahead, t_.size() - 1)]; }
    bool at(std::string_view sym) const { return peek().kind != Token::end && peek().text == sym; }

    [[noreturn]] void fail(const std::string& what) const
    {
        const auto& tok = peek();
        throw ParseError{"line " + std::to_string(tok.line) + ": expected " + what + ", found " +
                         (tok.kind == Token::end ? std::string("end of input") : "'" + tok.text + "'")};
    }

    void expect(std::string_view sym)
    {
        if (!at(sym)) {
            fail("'" + std::string(sym) + "'");
        }
        ++pos_;
    }

    bool accept(std::string_view sym)
    {
        if (at(sym)) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string name()
    {
        if (peek().kind != Token::ident || keyword(peek().text)) {
            fail("identifier");
        }
        return t_[pos_++].text;
    }

    void declaration()
    {
        if (accept("type")) {
            name();
            while (peek().kind == Token::ident && !keyword(peek().text)) {
                name();
            }
            if (accept("=")) {
                type();
            }
            expect(";");
        }
        else if (accept("function")) {
            name();
            type_params();
            expect("(");
            if (!at(")")) {
                formal();
                while (accept(",")) {
                    formal();
                }
            }
            expect(")");
            expect("returns");
            expect("(");
            formal();
            expect(")");
            expect(";");
        }
        else if (accept("axiom")) {
            expr();
            expect(";");
        }
        else {
            fail("declaration");
        }
    }

    void type_params()
    {
        if (accept("<")) {
            name();
            while (accept(",")) {
                name();
            }
            expect(">");
        }
    }

    void formal()
    {
        if (peek().kind == Token::ident && peek(1).text == ":" && peek(1).kind == Token::symbol) {
            name();
            expect(":");
        }
        type();
    }

    void type()
    {
        if (accept("[")) {
            type();
            while (accept(",")) {
                type();
            }
            expect("]");
            type();
            return;
        }
        if (accept("(")) {
            type();
            expect(")");
            return;
        }
        name();
        while (true) {
            if (peek().kind == Token::ident && !keyword(peek().text)) {
                name();
            }
            else if (at("(")) {
                ++pos_;
                type();
                expect(")");
            }
            else {
                return;
            }
        }
    }

    void expr() { equiv(); }

    void equiv()
    {
        implies();
        while (accept("<==>")) {
            implies();
        }
    }

    void implies()
    {
        logical();
        if (accept("==>")) {
            implies();
        }
    }

    void logical()
    {
        relation();
        if (at("&&")) {
            while (accept("&&")) {
                relation();
            }
        }
        else if (at("||")) {
            while (accept("||")) {
                relation();
            }
        }
    }

    void relation()
    {
        additive();
        for (std::string_view op : {"==", "!=", "<=", ">=", "<", ">"}) {
            if (accept(op)) {
                additive();
                return;
            }
        }
    }

    void additive()
    {
        unary();
        while (at("+") || at("-") || at("*")) {
            ++pos_;
            unary();
        }
    }

    void unary()
    {
        if (accept("!") || accept("-")) {
            unary();
            return;
        }
        postfix();
    }

    void postfix()
    {
        primary();
        while (accept("[")) {
            expr();
            while (accept(",")) {
                expr();
            }
            if (accept(":=")) {
                expr();
            }
            expect("]");
        }
    }

    void primary()
    {
        if (peek().kind == Token::number) {
            ++pos_;
            return;
        }
        if (accept("true") || accept("false")) {
            return;
        }
        if (accept("(")) {
            if (at("forall") || at("exists")) {
                ++pos_;
                type_params();
                binding();
                while (accept(",")) {
                    binding();
                }
                expect("::");
                while (accept("{")) {
                    expr();
                    while (accept(",")) {
                        expr();
                    }
                    expect("}");
                }
                expr();
            }
            else if (accept("if")) {
                expr();
                expect("then");
                expr();
                expect("else");
                expr();
            }
            else {
                expr();
            }
            expect(")");
            return;
        }
        name();
        if (accept("(")) {
            if (!at(")")) {
                expr();
                while (accept(",")) {
                    expr();
                }
            }
            expect(")");
        }
    }

    void binding()
    {
        name();
        expect(":");
        type();
    }

    std::vector<Token> t_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::string> grammar_check(std::string_view text)
{
    try {
        Parser p(lex(text));
        p.program();
    }
    catch (const ParseError& e) {
        return {e.message};
    }
    return {};
}

}  // namespace mbc::boogie
