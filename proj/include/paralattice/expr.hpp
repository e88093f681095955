#pragma once

/// Arithmetic expressions for matrix entries in run configs. The grammar
/// is deliberately tiny — numbers, + - * /, unary minus, sqrt(...), and
/// parentheses — just enough to write entries like "1/sqrt(3)" exactly as
/// they appear in worked examples.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "paralattice/errors.hpp"

namespace paralattice {

namespace detail {

class ExprParser {
  public:
    ExprParser(const std::string& text, const std::string& where) : s_(text), where_(where) {}

    double parse() {
        const double v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing characters");
        return v;
    }

  private:
    double expr() {
        double v = term();
        while (true) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                v += term();
            } else if (peek() == '-') {
                ++pos_;
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term() {
        double v = factor();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                v *= factor();
            } else if (peek() == '/') {
                ++pos_;
                v /= factor();
            } else {
                return v;
            }
        }
    }

    double factor() {
        skip_ws();
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (c == '(') {
            ++pos_;
            const double v = expr();
            expect(')');
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string ident;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
                ident += s_[pos_++];
            if (ident != "sqrt") fail("unknown function \"" + ident + "\"");
            skip_ws();
            expect('(');
            const double v = expr();
            expect(')');
            if (v < 0.0) fail("sqrt of a negative value");
            return std::sqrt(v);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("expected a number");
            pos_ += static_cast<std::size_t>(end - begin);
            return v;
        }
        fail(c == '\0' ? std::string("unexpected end of expression")
                       : "unexpected character '" + std::string(1, c) + "'");
    }

    [[nodiscard]] char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) fail("expected '" + std::string(1, c) + "'");
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(where_, "bad expression \"" + s_ + "\": " + msg);
    }

    const std::string& s_;
    std::string where_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Evaluates an entry expression; `where` names the config field for error
/// messages. The result must be finite.
inline double eval_expression(const std::string& text, const std::string& where = "") {
    const double v = detail::ExprParser(text, where).parse();
    if (!std::isfinite(v)) throw ConfigError(where, "expression \"" + text + "\" is not finite");
    return v;
}

} // namespace paralattice
