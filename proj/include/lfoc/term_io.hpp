#pragma once

// Concrete syntax for terms and commands.
//
//   <t | u>            command
//   mu -a . c          mu binder (negative variable)
//   mu (+k, -k') . c   pair binder
//   mu {+k} . c        box binder
//   mu !(+k) . c       bang binder
//   (V, V')            value pair
//   {V}                boxed value
//   !V                 banged value
//   daimon+ daimon-    daimon instructions
//   nat:N              primitive integer
//   k+:name k-:name    named instructions
//   +x -a              variables (sigil carries the polarity)
//
// Parser and printer round-trip.

#include <cctype>
#include <sstream>
#include <string>

#include "lfoc/term.hpp"

namespace lfoc {

namespace detail {

struct cursor {
    const std::string& src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
            ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        if (pos >= src.size()) throw parse_error("unexpected end of input");
        return src[pos];
    }
    char get() {
        char c = peek();
        ++pos;
        return c;
    }
    bool try_consume(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!try_consume(c))
            throw parse_error(std::string("expected '") + c + "' at offset " +
                              std::to_string(pos));
    }
    bool try_keyword(const std::string& kw) {
        skip_ws();
        if (src.compare(pos, kw.size(), kw) != 0) return false;
        std::size_t end = pos + kw.size();
        if (end < src.size() &&
            (std::isalnum(static_cast<unsigned char>(src[end])) ||
             src[end] == '_' || src[end] == '\''))
            return false;
        pos = end;
        return true;
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        if (pos < src.size() &&
            (std::isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                src[pos] == '_' || src[pos] == '\''))
            ++pos;
        if (start == pos)
            throw parse_error("expected identifier at offset " +
                              std::to_string(pos));
        return src.substr(start, pos - start);
    }
    std::uint64_t number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
            ++pos;
        if (start == pos)
            throw parse_error("expected number at offset " + std::to_string(pos));
        return std::stoull(src.substr(start, pos - start));
    }
};

class term_parser {
public:
    explicit term_parser(const std::string& src) : cur_{src} {}

    term_ptr parse_term() {
        term_ptr t = term_atom();
        if (!cur_.eof())
            throw parse_error("trailing input at offset " +
                              std::to_string(cur_.pos));
        return t;
    }

    command parse_command() {
        command c = command_atom();
        if (!cur_.eof())
            throw parse_error("trailing input at offset " +
                              std::to_string(cur_.pos));
        return c;
    }

    command command_atom() {
        cur_.expect('<');
        term_ptr a = term_atom();
        cur_.expect('|');
        term_ptr b = term_atom();
        cur_.expect('>');
        return make_command(std::move(a), std::move(b));
    }

    term_ptr term_atom() {
        if (cur_.try_keyword("mu")) return mu_term();
        if (cur_.try_keyword("daimon")) {
            if (cur_.try_consume('+')) return daimon(polarity::positive);
            cur_.expect('-');
            return daimon(polarity::negative);
        }
        if (cur_.try_keyword("nat")) {
            cur_.expect(':');
            return nat(cur_.number());
        }
        if (cur_.try_keyword("k")) {
            bool pos = cur_.try_consume('+');
            if (!pos) cur_.expect('-');
            cur_.expect(':');
            std::string name = cur_.ident();
            return pos ? pos_instr(name) : neg_instr(name);
        }
        char c = cur_.peek();
        if (c == '+' || c == '-') return var(parse_variable());
        if (c == '!') {
            cur_.get();
            return bang(term_atom());
        }
        if (c == '{') {
            cur_.get();
            term_ptr body = term_atom();
            cur_.expect('}');
            return box(std::move(body));
        }
        if (c == '(') {
            cur_.get();
            term_ptr fst = term_atom();
            cur_.expect(',');
            term_ptr snd = term_atom();
            cur_.expect(')');
            return pair(std::move(fst), std::move(snd));
        }
        throw parse_error(std::string("unexpected character '") + c +
                          "' at offset " + std::to_string(cur_.pos));
    }

private:
    variable parse_variable() {
        char sigil = cur_.get();
        polarity p = sigil == '+' ? polarity::positive : polarity::negative;
        return variable{cur_.ident(), p};
    }

    term_ptr mu_term() {
        char c = cur_.peek();
        if (c == '(') {
            cur_.get();
            variable v1 = parse_variable();
            cur_.expect(',');
            variable v2 = parse_variable();
            cur_.expect(')');
            cur_.expect('.');
            return mu_pair(v1, v2, command_atom());
        }
        if (c == '{') {
            cur_.get();
            variable v = parse_variable();
            cur_.expect('}');
            cur_.expect('.');
            return mu_box(v, command_atom());
        }
        if (c == '!') {
            cur_.get();
            cur_.expect('(');
            variable v = parse_variable();
            cur_.expect(')');
            cur_.expect('.');
            return mu_bang(v, command_atom());
        }
        variable v = parse_variable();
        cur_.expect('.');
        return mu(v, command_atom());
    }

    cursor cur_;
};

}  // namespace detail

inline term_ptr parse_term(const std::string& src) {
    return detail::term_parser(src).parse_term();
}
inline command parse_command(const std::string& src) {
    return detail::term_parser(src).parse_command();
}

// --- printing ----------------------------------------------------------------

void print_term(std::ostream& os, const term_ptr& t);

inline void print_variable(std::ostream& os, const variable& v) {
    os << polarity_sigil(v.pol) << v.name;
}

inline void print_command(std::ostream& os, const command& c) {
    os << '<';
    print_term(os, c.pos);
    os << " | ";
    print_term(os, c.neg);
    os << '>';
}

inline void print_term(std::ostream& os, const term_ptr& t) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t_var>) {
                print_variable(os, n.v);
            } else if constexpr (std::is_same_v<T, t_pair>) {
                os << '(';
                print_term(os, n.fst);
                os << ", ";
                print_term(os, n.snd);
                os << ')';
            } else if constexpr (std::is_same_v<T, t_box>) {
                os << '{';
                print_term(os, n.body);
                os << '}';
            } else if constexpr (std::is_same_v<T, t_bang>) {
                os << '!';
                print_term(os, n.body);
            } else if constexpr (std::is_same_v<T, t_pos_instr>) {
                os << "k+:" << n.name;
            } else if constexpr (std::is_same_v<T, t_neg_instr>) {
                os << "k-:" << n.name;
            } else if constexpr (std::is_same_v<T, t_daimon>) {
                os << "daimon" << polarity_sigil(n.pol);
            } else if constexpr (std::is_same_v<T, t_nat>) {
                os << "nat:" << n.value;
            } else if constexpr (std::is_same_v<T, t_mu_neg> ||
                                 std::is_same_v<T, t_mu_pos>) {
                os << "mu ";
                print_variable(os, n.v);
                os << " . ";
                print_command(os, n.body);
            } else if constexpr (std::is_same_v<T, t_mu_pair>) {
                os << "mu (";
                print_variable(os, n.v1);
                os << ", ";
                print_variable(os, n.v2);
                os << ") . ";
                print_command(os, n.body);
            } else if constexpr (std::is_same_v<T, t_mu_box>) {
                os << "mu {";
                print_variable(os, n.v);
                os << "} . ";
                print_command(os, n.body);
            } else if constexpr (std::is_same_v<T, t_mu_bang>) {
                os << "mu !(";
                print_variable(os, n.v);
                os << ") . ";
                print_command(os, n.body);
            }
        },
        t->node());
}

inline std::string to_string(const term_ptr& t) {
    std::ostringstream os;
    print_term(os, t);
    return os.str();
}
inline std::string to_string(const command& c) {
    std::ostringstream os;
    print_command(os, c);
    return os.str();
}

}  // namespace lfoc
