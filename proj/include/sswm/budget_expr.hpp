#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sswm/error.hpp"

namespace sswm {

/// Arithmetic formula of the problem size n, e.g. "50*n*ln(n)" or "10*n^2.5".
///
///   expr    := term (('+' | '-') term)*
///   term    := power (('*' | '/') power)*
///   power   := unary ('^' power)?          right-associative
///   unary   := '-' unary | primary
///   primary := number | 'n' | func '(' expr ')' | '(' expr ')'
///   func    := ln | log | sqrt | exp        (log is the natural log)
class BudgetExpression {
public:
    BudgetExpression() = default;

    static BudgetExpression parse(std::string_view text) {
        BudgetExpression e;
        e.text_ = std::string(text);
        Parser p{text, 0, e.code_};
        p.skip();
        if (p.at_end()) throw parameter_error("budget expression is empty");
        p.expr();
        p.skip();
        if (!p.at_end()) p.fail("unexpected trailing input");
        return e;
    }

    [[nodiscard]] const std::string& text() const noexcept { return text_; }

    [[nodiscard]] double evaluate(double n) const {
        std::vector<double> st;
        st.reserve(code_.size());
        auto pop = [&] {
            const double v = st.back();
            st.pop_back();
            return v;
        };
        for (const auto& op : code_) {
            switch (op.kind) {
            case Op::number: st.push_back(op.value); break;
            case Op::var: st.push_back(n); break;
            case Op::neg: st.back() = -st.back(); break;
            case Op::ln: st.back() = std::log(st.back()); break;
            case Op::sqrt: st.back() = std::sqrt(st.back()); break;
            case Op::exp: st.back() = std::exp(st.back()); break;
            default: {
                const double r = pop(), l = pop();
                switch (op.kind) {
                case Op::add: st.push_back(l + r); break;
                case Op::sub: st.push_back(l - r); break;
                case Op::mul: st.push_back(l * r); break;
                case Op::div: st.push_back(l / r); break;
                default: st.push_back(std::pow(l, r)); break;
                }
            }
            }
        }
        return st.back();
    }

    /// ceil(evaluate(n)); must be a positive finite integer.
    [[nodiscard]] std::uint64_t budget(std::size_t n) const {
        const double v = std::ceil(evaluate(static_cast<double>(n)));
        if (!std::isfinite(v) || v < 1.0 || v > 1.8e19)
            throw parameter_error("budget expression '" + text_ + "' gives no positive budget at n=" +
                                  std::to_string(n));
        return static_cast<std::uint64_t>(v);
    }

private:
    struct Op {
        enum Kind { number, var, add, sub, mul, div, pow, neg, ln, sqrt, exp } kind;
        double value = 0.0;
    };

    struct Parser {
        std::string_view s;
        std::size_t pos;
        std::vector<Op>& out;

        [[noreturn]] void fail(const std::string& what) const {
            throw parameter_error("malformed budget expression '" + std::string(s) + "': " + what + " at column " +
                                  std::to_string(pos + 1));
        }
        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        [[nodiscard]] bool at_end() const { return pos >= s.size(); }
        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        void expr() {
            term();
            for (;;) {
                if (eat('+')) { term(); out.push_back({Op::add}); }
                else if (eat('-')) { term(); out.push_back({Op::sub}); }
                else return;
            }
        }
        void term() {
            unary();
            for (;;) {
                if (eat('*')) { unary(); out.push_back({Op::mul}); }
                else if (eat('/')) { unary(); out.push_back({Op::div}); }
                else return;
            }
        }
        // -a^b is -(a^b); the exponent may carry its own sign.
        void unary() {
            if (eat('-')) {
                unary();
                out.push_back({Op::neg});
                return;
            }
            power();
        }
        void power() {
            primary();
            if (eat('^')) {
                unary();
                out.push_back({Op::pow});
            }
        }
        void primary() {
            skip();
            if (at_end()) fail("expected operand");
            const char c = s[pos];
            if (eat('(')) {
                expr();
                if (!eat(')')) fail("expected ')'");
                return;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                double v = 0.0;
                try {
                    v = std::stod(std::string(s.substr(pos)), &used);
                } catch (const std::exception&) {
                    fail("bad number");
                }
                pos += used;
                out.push_back({Op::number, v});
                return;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t end = pos;
                while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
                const std::string_view id = s.substr(pos, end - pos);
                pos = end;
                if (id == "n") {
                    out.push_back({Op::var});
                    return;
                }
                Op::Kind fn;
                if (id == "ln" || id == "log") fn = Op::ln;
                else if (id == "sqrt") fn = Op::sqrt;
                else if (id == "exp") fn = Op::exp;
                else fail("unknown identifier '" + std::string(id) + "'");
                if (!eat('(')) fail("expected '(' after function name");
                expr();
                if (!eat(')')) fail("expected ')'");
                out.push_back({fn});
                return;
            }
            fail(std::string("unexpected character '") + c + "'");
        }
    };

    std::string text_;
    std::vector<Op> code_;
};

} // namespace sswm
