#pragma once

// Polarized term syntax of the focalising calculus.
//
// Commands are interactions <t|u> between a positive and a negative term and
// are stored with the positive component on the left, which realizes the
// identification <t|u> = <u|t> and makes rule dispatch in the machine
// syntax-directed. Terms are immutable shared trees; all operations here are
// pure.

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lfoc {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};
struct polarity_error : error {
    explicit polarity_error(const std::string& msg) : error(msg) {}
};
struct value_error : error {
    explicit value_error(const std::string& msg) : error(msg) {}
};
struct parse_error : error {
    explicit parse_error(const std::string& msg) : error(msg) {}
};

enum class polarity : unsigned char { positive, negative };

inline polarity opposite(polarity p) {
    return p == polarity::positive ? polarity::negative : polarity::positive;
}

inline char polarity_sigil(polarity p) {
    return p == polarity::positive ? '+' : '-';
}

struct variable {
    std::string name;
    polarity pol;

    friend bool operator==(const variable& a, const variable& b) {
        return a.pol == b.pol && a.name == b.name;
    }
    friend bool operator<(const variable& a, const variable& b) {
        if (a.name != b.name) return a.name < b.name;
        return static_cast<int>(a.pol) < static_cast<int>(b.pol);
    }
};

class term;
using term_ptr = std::shared_ptr<const term>;

struct command {
    term_ptr pos;  // positive component
    term_ptr neg;  // negative component
};

// Term variants. mu_neg binds a negative variable (mu a.c, a positive term),
// mu_pos binds a positive one (mu x.c, a negative term).
struct t_var { variable v; };
struct t_pair { term_ptr fst, snd; };
struct t_box { term_ptr body; };
struct t_bang { term_ptr body; };
struct t_pos_instr { std::string name; };
struct t_neg_instr { std::string name; };
struct t_daimon { polarity pol; };
struct t_nat { std::uint64_t value; };
struct t_mu_neg { variable v; command body; };
struct t_mu_pos { variable v; command body; };
struct t_mu_pair { variable v1, v2; command body; };
struct t_mu_box { variable v; command body; };
struct t_mu_bang { variable v; command body; };

using term_node =
    std::variant<t_var, t_pair, t_box, t_bang, t_pos_instr, t_neg_instr,
                 t_daimon, t_nat, t_mu_neg, t_mu_pos, t_mu_pair, t_mu_box,
                 t_mu_bang>;

class term {
public:
    explicit term(term_node node) : node_(std::move(node)) {}
    const term_node& node() const { return node_; }

    template <class T>
    const T* as() const { return std::get_if<T>(&node_); }

private:
    term_node node_;
};

inline polarity polarity_of(const term& t) {
    return std::visit(
        [](const auto& n) -> polarity {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t_var>) return n.v.pol;
            else if constexpr (std::is_same_v<T, t_daimon>) return n.pol;
            else if constexpr (std::is_same_v<T, t_pair> ||
                               std::is_same_v<T, t_box> ||
                               std::is_same_v<T, t_bang> ||
                               std::is_same_v<T, t_pos_instr> ||
                               std::is_same_v<T, t_nat> ||
                               std::is_same_v<T, t_mu_neg>)
                return polarity::positive;
            else
                return polarity::negative;
        },
        t.node());
}

inline polarity polarity_of(const term_ptr& t) { return polarity_of(*t); }

// Values: every negative term, and positive terms other than mu a.c.
// !t counts as a value only when its component does.
inline bool is_value(const term_ptr& t) {
    if (polarity_of(t) == polarity::negative) return true;
    if (t->as<t_mu_neg>()) return false;
    if (const auto* b = t->as<t_bang>()) return is_value(b->body);
    return true;
}

// --- constructors -----------------------------------------------------------

inline term_ptr var(variable v) {
    return std::make_shared<term>(t_var{std::move(v)});
}
inline term_ptr var(std::string name, polarity p) {
    return var(variable{std::move(name), p});
}
inline term_ptr pos_var(std::string name) {
    return var(std::move(name), polarity::positive);
}
inline term_ptr neg_var(std::string name) {
    return var(std::move(name), polarity::negative);
}

inline term_ptr pair(term_ptr fst, term_ptr snd) {
    if (!is_value(fst) || !is_value(snd))
        throw value_error("pair components must be values");
    return std::make_shared<term>(t_pair{std::move(fst), std::move(snd)});
}

inline term_ptr box(term_ptr body) {
    if (!is_value(body)) throw value_error("box component must be a value");
    return std::make_shared<term>(t_box{std::move(body)});
}

inline term_ptr bang(term_ptr body) {
    return std::make_shared<term>(t_bang{std::move(body)});
}

inline term_ptr pos_instr(std::string name) {
    return std::make_shared<term>(t_pos_instr{std::move(name)});
}
inline term_ptr neg_instr(std::string name) {
    return std::make_shared<term>(t_neg_instr{std::move(name)});
}
inline term_ptr daimon(polarity p) {
    return std::make_shared<term>(t_daimon{p});
}
inline term_ptr nat(std::uint64_t n) {
    return std::make_shared<term>(t_nat{n});
}

inline command make_command(term_ptr a, term_ptr b) {
    polarity pa = polarity_of(a), pb = polarity_of(b);
    if (pa == pb)
        throw polarity_error("command requires one positive and one negative term");
    if (pa == polarity::positive) return command{std::move(a), std::move(b)};
    return command{std::move(b), std::move(a)};
}

inline term_ptr mu_neg(variable v, command body) {
    if (v.pol != polarity::negative)
        throw polarity_error("mu " + v.name + ": binder must be negative");
    return std::make_shared<term>(t_mu_neg{std::move(v), std::move(body)});
}
inline term_ptr mu_pos(variable v, command body) {
    if (v.pol != polarity::positive)
        throw polarity_error("mu " + v.name + ": binder must be positive");
    return std::make_shared<term>(t_mu_pos{std::move(v), std::move(body)});
}
inline term_ptr mu_pair(variable v1, variable v2, command body) {
    if (v1 == v2)
        throw error("mu (k,k'): binders must be distinct");
    return std::make_shared<term>(
        t_mu_pair{std::move(v1), std::move(v2), std::move(body)});
}
inline term_ptr mu_box(variable v, command body) {
    return std::make_shared<term>(t_mu_box{std::move(v), std::move(body)});
}
inline term_ptr mu_bang(variable v, command body) {
    return std::make_shared<term>(t_mu_bang{std::move(v), std::move(body)});
}

// Generic mu binder: picks mu_neg or mu_pos from the variable's polarity.
inline term_ptr mu(variable v, command body) {
    return v.pol == polarity::negative ? mu_neg(v, std::move(body))
                                       : mu_pos(v, std::move(body));
}

// --- free variables ---------------------------------------------------------

using var_set = std::set<variable>;

void free_vars_into(const term_ptr& t, var_set& out);

inline void free_vars_into(const command& c, var_set& out) {
    free_vars_into(c.pos, out);
    free_vars_into(c.neg, out);
}

inline void free_vars_into(const term_ptr& t, var_set& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t_var>) {
                out.insert(n.v);
            } else if constexpr (std::is_same_v<T, t_pair>) {
                free_vars_into(n.fst, out);
                free_vars_into(n.snd, out);
            } else if constexpr (std::is_same_v<T, t_box> ||
                                 std::is_same_v<T, t_bang>) {
                free_vars_into(n.body, out);
            } else if constexpr (std::is_same_v<T, t_mu_neg> ||
                                 std::is_same_v<T, t_mu_pos> ||
                                 std::is_same_v<T, t_mu_box> ||
                                 std::is_same_v<T, t_mu_bang>) {
                var_set inner;
                free_vars_into(n.body, inner);
                inner.erase(n.v);
                out.insert(inner.begin(), inner.end());
            } else if constexpr (std::is_same_v<T, t_mu_pair>) {
                var_set inner;
                free_vars_into(n.body, inner);
                inner.erase(n.v1);
                inner.erase(n.v2);
                out.insert(inner.begin(), inner.end());
            }
        },
        t->node());
}

inline var_set free_vars(const term_ptr& t) {
    var_set out;
    free_vars_into(t, out);
    return out;
}
inline var_set free_vars(const command& c) {
    var_set out;
    free_vars_into(c, out);
    return out;
}

inline bool is_closed(const command& c) { return free_vars(c).empty(); }

// --- size -------------------------------------------------------------------

std::size_t size_of(const term_ptr& t);

inline std::size_t size_of(const command& c) {
    return 1 + size_of(c.pos) + size_of(c.neg);
}

inline std::size_t size_of(const term_ptr& t) {
    return std::visit(
        [](const auto& n) -> std::size_t {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t_pair>)
                return 1 + size_of(n.fst) + size_of(n.snd);
            else if constexpr (std::is_same_v<T, t_box> ||
                               std::is_same_v<T, t_bang>)
                return 1 + size_of(n.body);
            else if constexpr (std::is_same_v<T, t_mu_neg> ||
                               std::is_same_v<T, t_mu_pos> ||
                               std::is_same_v<T, t_mu_pair> ||
                               std::is_same_v<T, t_mu_box> ||
                               std::is_same_v<T, t_mu_bang>)
                return 1 + size_of(n.body);
            else
                return 1;
        },
        t->node());
}

// --- fresh names ------------------------------------------------------------

inline variable fresh_var(const std::string& base, polarity p,
                          const var_set& avoid) {
    variable cand{base, p};
    if (!avoid.count(cand)) return cand;
    for (unsigned long i = 0;; ++i) {
        cand.name = base + std::to_string(i);
        if (!avoid.count(cand)) return cand;
    }
}

// --- substitution -----------------------------------------------------------

using substitution = std::map<variable, term_ptr>;

term_ptr substitute(const term_ptr& t, const substitution& s);
command substitute(const command& c, const substitution& s);

namespace detail {

inline void check_substitution(const substitution& s) {
    for (const auto& [v, payload] : s) {
        if (polarity_of(payload) != v.pol)
            throw polarity_error("substitution for " + v.name +
                                 " has the wrong polarity");
    }
}

inline var_set payload_free_vars(const substitution& s) {
    var_set out;
    for (const auto& [v, payload] : s) free_vars_into(payload, out);
    return out;
}

// Substitutes under one binder, renaming it when it would capture.
template <class Rebuild>
term_ptr subst_binder(std::vector<variable> binders, const command& body,
                      const substitution& s, Rebuild rebuild) {
    substitution inner = s;
    for (const auto& b : binders) inner.erase(b);
    if (inner.empty()) return rebuild(binders, body);

    var_set captured = payload_free_vars(inner);
    bool clash = false;
    for (const auto& b : binders)
        if (captured.count(b)) clash = true;
    if (!clash) return rebuild(binders, substitute(body, inner));

    var_set avoid = captured;
    free_vars_into(body, avoid);
    for (const auto& b : binders) avoid.insert(b);
    substitution rename;
    for (auto& b : binders) {
        if (!captured.count(b)) continue;
        variable nb = fresh_var(b.name, b.pol, avoid);
        avoid.insert(nb);
        rename[b] = var(nb);
        b = nb;
    }
    command renamed = substitute(body, rename);
    return rebuild(binders, substitute(renamed, inner));
}

}  // namespace detail

inline command substitute(const command& c, const substitution& s) {
    // Re-canonicalizes: a substituted variable may flip which side is
    // positive only in degenerate cases, but make_command re-checks anyway.
    return make_command(substitute(c.pos, s), substitute(c.neg, s));
}

inline term_ptr substitute(const term_ptr& t, const substitution& s) {
    if (s.empty()) return t;
    detail::check_substitution(s);
    return std::visit(
        [&](const auto& n) -> term_ptr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t_var>) {
                auto it = s.find(n.v);
                return it == s.end() ? t : it->second;
            } else if constexpr (std::is_same_v<T, t_pair>) {
                return pair(substitute(n.fst, s), substitute(n.snd, s));
            } else if constexpr (std::is_same_v<T, t_box>) {
                return box(substitute(n.body, s));
            } else if constexpr (std::is_same_v<T, t_bang>) {
                return bang(substitute(n.body, s));
            } else if constexpr (std::is_same_v<T, t_mu_neg>) {
                return detail::subst_binder(
                    {n.v}, n.body, s, [](const auto& bs, const command& c) {
                        return mu_neg(bs[0], c);
                    });
            } else if constexpr (std::is_same_v<T, t_mu_pos>) {
                return detail::subst_binder(
                    {n.v}, n.body, s, [](const auto& bs, const command& c) {
                        return mu_pos(bs[0], c);
                    });
            } else if constexpr (std::is_same_v<T, t_mu_pair>) {
                return detail::subst_binder(
                    {n.v1, n.v2}, n.body, s,
                    [](const auto& bs, const command& c) {
                        return mu_pair(bs[0], bs[1], c);
                    });
            } else if constexpr (std::is_same_v<T, t_mu_box>) {
                return detail::subst_binder(
                    {n.v}, n.body, s, [](const auto& bs, const command& c) {
                        return mu_box(bs[0], c);
                    });
            } else if constexpr (std::is_same_v<T, t_mu_bang>) {
                return detail::subst_binder(
                    {n.v}, n.body, s, [](const auto& bs, const command& c) {
                        return mu_bang(bs[0], c);
                    });
            } else {
                return t;  // instructions, daimons, nats
            }
        },
        t->node());
}

inline term_ptr substitute(const term_ptr& t, const variable& v,
                           const term_ptr& payload) {
    return substitute(t, substitution{{v, payload}});
}
inline command substitute(const command& c, const variable& v,
                          const term_ptr& payload) {
    return substitute(c, substitution{{v, payload}});
}

// --- general pair / box macros ----------------------------------------------

// (t,u) and {t} for arbitrary terms; literal when the components are already
// values, otherwise the mu-expansion evaluating left to right.
inline term_ptr make_pair(const term_ptr& t, const term_ptr& u) {
    if (is_value(t) && is_value(u)) return pair(t, u);
    var_set avoid = free_vars(t);
    free_vars_into(u, avoid);
    variable a = fresh_var("a", polarity::negative, avoid);
    avoid.insert(a);
    variable k = fresh_var("k", polarity_of(t), avoid);
    avoid.insert(k);
    variable k2 = fresh_var("k'", polarity_of(u), avoid);
    command inner = make_command(pair(var(k), var(k2)), var(a));
    command mid = make_command(u, mu(k2, inner));
    command outer = make_command(t, mu(k, mid));
    return mu_neg(a, outer);
}

inline term_ptr make_box(const term_ptr& t) {
    if (is_value(t)) return box(t);
    var_set avoid = free_vars(t);
    variable a = fresh_var("a", polarity::negative, avoid);
    avoid.insert(a);
    variable k = fresh_var("k", polarity_of(t), avoid);
    command inner = make_command(box(var(k)), var(a));
    return mu_neg(a, make_command(t, mu(k, inner)));
}

// --- bang macro: !_{x1..xk} t -----------------------------------------------

inline term_ptr bang_macro(const std::vector<variable>& vars,
                           const term_ptr& t) {
    for (const auto& v : vars) {
        if (v.pol != polarity::positive)
            throw polarity_error("bang_macro: boxed variables must be positive");
        std::size_t count = 0;
        for (const auto& w : vars)
            if (w == v) ++count;
        if (count > 1) throw error("bang_macro: duplicate variable " + v.name);
    }
    var_set avoid = free_vars(t);
    for (const auto& v : vars) avoid.insert(v);
    variable k = fresh_var("k", polarity::negative, avoid);
    // innermost command first: <!t | k>, then wrap each variable in order so
    // that vars[0] ends up outermost
    command body = make_command(bang(t), var(k));
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = make_command(var(*it), mu_bang(*it, body));
    return mu_neg(k, body);
}

// --- alpha canonicalization and equality -------------------------------------

namespace detail {

struct canon_state {
    std::map<variable, variable> renaming;
    unsigned long next = 0;

    variable intro(const variable& v) {
        variable nv{"%" + std::to_string(next++), v.pol};
        renaming[v] = nv;
        return nv;
    }
};

term_ptr canonicalize(const term_ptr& t, canon_state& st);

inline command canonicalize(const command& c, canon_state& st) {
    return command{canonicalize(c.pos, st), canonicalize(c.neg, st)};
}

inline term_ptr canonicalize(const term_ptr& t, canon_state& st) {
    return std::visit(
        [&](const auto& n) -> term_ptr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t_var>) {
                auto it = st.renaming.find(n.v);
                return it == st.renaming.end() ? t : var(it->second);
            } else if constexpr (std::is_same_v<T, t_pair>) {
                auto f = canonicalize(n.fst, st);
                return std::make_shared<term>(
                    t_pair{f, canonicalize(n.snd, st)});
            } else if constexpr (std::is_same_v<T, t_box>) {
                return std::make_shared<term>(t_box{canonicalize(n.body, st)});
            } else if constexpr (std::is_same_v<T, t_bang>) {
                return std::make_shared<term>(t_bang{canonicalize(n.body, st)});
            } else if constexpr (std::is_same_v<T, t_mu_neg> ||
                                 std::is_same_v<T, t_mu_pos> ||
                                 std::is_same_v<T, t_mu_box> ||
                                 std::is_same_v<T, t_mu_bang>) {
                canon_state saved = st;
                variable nv = st.intro(n.v);
                command body = canonicalize(n.body, st);
                st.renaming = saved.renaming;
                return std::make_shared<term>(T{nv, body});
            } else if constexpr (std::is_same_v<T, t_mu_pair>) {
                canon_state saved = st;
                variable nv1 = st.intro(n.v1);
                variable nv2 = st.intro(n.v2);
                command body = canonicalize(n.body, st);
                st.renaming = saved.renaming;
                return std::make_shared<term>(t_mu_pair{nv1, nv2, body});
            } else {
                return t;
            }
        },
        t->node());
}

bool structural_equal(const term_ptr& a, const term_ptr& b);

inline bool structural_equal(const command& a, const command& b) {
    return structural_equal(a.pos, b.pos) && structural_equal(a.neg, b.neg);
}

inline bool structural_equal(const term_ptr& a, const term_ptr& b) {
    if (a->node().index() != b->node().index()) return false;
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b->node());
            if constexpr (std::is_same_v<T, t_var>) {
                return na.v == nb.v;
            } else if constexpr (std::is_same_v<T, t_pair>) {
                return structural_equal(na.fst, nb.fst) &&
                       structural_equal(na.snd, nb.snd);
            } else if constexpr (std::is_same_v<T, t_box> ||
                                 std::is_same_v<T, t_bang>) {
                return structural_equal(na.body, nb.body);
            } else if constexpr (std::is_same_v<T, t_pos_instr> ||
                                 std::is_same_v<T, t_neg_instr>) {
                return na.name == nb.name;
            } else if constexpr (std::is_same_v<T, t_daimon>) {
                return na.pol == nb.pol;
            } else if constexpr (std::is_same_v<T, t_nat>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, t_mu_pair>) {
                return na.v1 == nb.v1 && na.v2 == nb.v2 &&
                       structural_equal(na.body, nb.body);
            } else {
                return na.v == nb.v && structural_equal(na.body, nb.body);
            }
        },
        a->node());
}

}  // namespace detail

inline term_ptr canonicalize(const term_ptr& t) {
    detail::canon_state st;
    return detail::canonicalize(t, st);
}
inline command canonicalize(const command& c) {
    detail::canon_state st;
    return detail::canonicalize(c, st);
}

inline bool alpha_equal(const term_ptr& a, const term_ptr& b) {
    return detail::structural_equal(canonicalize(a), canonicalize(b));
}
inline bool alpha_equal(const command& a, const command& b) {
    return detail::structural_equal(canonicalize(a), canonicalize(b));
}

// --- affine usage check -------------------------------------------------------

namespace detail {

inline std::size_t occurrences(const term_ptr& t, const variable& v);

inline std::size_t occurrences(const command& c, const variable& v) {
    return occurrences(c.pos, v) + occurrences(c.neg, v);
}

inline std::size_t occurrences(const term_ptr& t, const variable& v) {
    return std::visit(
        [&](const auto& n) -> std::size_t {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t_var>) {
                return n.v == v ? 1 : 0;
            } else if constexpr (std::is_same_v<T, t_pair>) {
                return occurrences(n.fst, v) + occurrences(n.snd, v);
            } else if constexpr (std::is_same_v<T, t_box> ||
                                 std::is_same_v<T, t_bang>) {
                return occurrences(n.body, v);
            } else if constexpr (std::is_same_v<T, t_mu_pair>) {
                if (n.v1 == v || n.v2 == v) return 0;
                return occurrences(n.body, v);
            } else if constexpr (std::is_same_v<T, t_mu_neg> ||
                                 std::is_same_v<T, t_mu_pos> ||
                                 std::is_same_v<T, t_mu_box> ||
                                 std::is_same_v<T, t_mu_bang>) {
                if (n.v == v) return 0;
                return occurrences(n.body, v);
            } else {
                return 0;
            }
        },
        t->node());
}

bool is_affine_term(const term_ptr& t);

inline bool is_affine_command(const command& c) {
    return is_affine_term(c.pos) && is_affine_term(c.neg);
}

inline bool is_affine_term(const term_ptr& t) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t_pair>) {
                return is_affine_term(n.fst) && is_affine_term(n.snd);
            } else if constexpr (std::is_same_v<T, t_box> ||
                                 std::is_same_v<T, t_bang>) {
                return is_affine_term(n.body);
            } else if constexpr (std::is_same_v<T, t_mu_pair>) {
                return occurrences(n.body, n.v1) <= 1 &&
                       occurrences(n.body, n.v2) <= 1 &&
                       is_affine_command(n.body);
            } else if constexpr (std::is_same_v<T, t_mu_neg> ||
                                 std::is_same_v<T, t_mu_pos> ||
                                 std::is_same_v<T, t_mu_box> ||
                                 std::is_same_v<T, t_mu_bang>) {
                return occurrences(n.body, n.v) <= 1 &&
                       is_affine_command(n.body);
            } else {
                return true;
            }
        },
        t->node());
}

}  // namespace detail

// Each bound variable occurs at most once under its binder.
inline bool is_affine(const term_ptr& t) { return detail::is_affine_term(t); }
inline bool is_affine(const command& c) {
    return detail::is_affine_command(c);
}

}  // namespace lfoc
