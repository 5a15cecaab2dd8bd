// Copyright 2026 The relaxplace Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reader and writer for the ASP fact format:
//
//   node("n").  link("a","b").  node_attr("n","key",V).  link_attr("a","b","key",V).
//   service("s").  dependency("s","t").
//   hreq(T,E).  sreq(T,E).  sreq(T,E,Level).  violation_cost(T,E,(Weight,Level)).
//
// T is "s" or ("s","t"); E is one of lt/gt/lte/gte/eq/neq/reserve("key",V);
// V is an integer, true or false.  `%` starts a line comment and `%* ... *%`
// a block comment.

#ifndef RELAXPLACE_FACTS_HPP
#define RELAXPLACE_FACTS_HPP

#include <cctype>
#include <charconv>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "relaxplace/model.hpp"

namespace relaxplace {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct ParseOptions {
    /// Soft requirements without a violation_cost fact get weight 0 instead of 1.
    bool strict = false;
};

namespace detail {

struct Pos {
    int line = 1;
    int column = 1;
};

struct Term {
    enum class Type { String, Int, Bool, Func, Tuple };
    Type type = Type::Int;
    std::string text;  // string contents or function name
    std::int64_t number = 0;
    bool boolean = false;
    std::vector<Term> args;
    Pos pos;
};

class FactReader {
public:
    explicit FactReader(std::string_view text) : text_(text) {}

    /// Returns false at end of input.
    bool next(Term& fact) {
        skip_space();
        if (at_end()) return false;
        Pos start = pos_;
        if (!std::islower(static_cast<unsigned char>(peek())))
            fail(start, std::string("expected a predicate name, found '") + peek() + "'");
        fact = parse_term();
        if (fact.type != Term::Type::Func) fail(start, "expected a fact");
        skip_space();
        if (at_end() || peek() != '.') fail(pos_, "expected '.' after fact");
        advance();
        return true;
    }

    [[noreturn]] static void fail(Pos p, const std::string& msg) { throw ParseError(p.line, p.column, msg); }

private:
    bool at_end() const { return offset_ >= text_.size(); }
    char peek() const { return text_[offset_]; }
    char peek_at(std::size_t ahead) const {
        return offset_ + ahead < text_.size() ? text_[offset_ + ahead] : '\0';
    }

    void advance() {
        if (text_[offset_] == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        ++offset_;
    }

    void skip_space() {
        while (!at_end()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '%' && peek_at(1) == '*') {
                Pos open = pos_;
                advance();
                advance();
                while (!(peek_at(0) == '*' && peek_at(1) == '%')) {
                    if (at_end()) fail(open, "unterminated block comment");
                    advance();
                }
                advance();
                advance();
            } else if (c == '%') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        skip_space();
        if (at_end() || peek() != c) fail(pos_, std::string("expected '") + c + "'");
        advance();
    }

    Term parse_term() {
        skip_space();
        if (at_end()) fail(pos_, "unexpected end of input");
        Term t;
        t.pos = pos_;
        char c = peek();
        if (c == '"') {
            t.type = Term::Type::String;
            advance();
            for (;;) {
                if (at_end() || peek() == '\n') fail(t.pos, "unterminated string");
                char d = peek();
                advance();
                if (d == '"') break;
                if (d == '\\') {
                    if (at_end()) fail(t.pos, "unterminated string");
                    char e = peek();
                    advance();
                    if (e == 'n') t.text += '\n';
                    else if (e == 't') t.text += '\t';
                    else t.text += e;
                } else {
                    t.text += d;
                }
            }
        } else if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            t.type = Term::Type::Int;
            std::size_t begin = offset_;
            if (c == '-') advance();
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail(t.pos, "malformed integer");
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
            auto digits = text_.substr(begin, offset_ - begin);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.number);
            if (ec != std::errc{}) fail(t.pos, "integer out of range");
        } else if (std::islower(static_cast<unsigned char>(c))) {
            std::string name;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                name += peek();
                advance();
            }
            skip_space();
            if (!at_end() && peek() == '(') {
                t.type = Term::Type::Func;
                t.text = std::move(name);
                advance();
                t.args = parse_args();
            } else if (name == "true" || name == "false") {
                t.type = Term::Type::Bool;
                t.boolean = name == "true";
            } else {
                fail(t.pos, "unsupported constant '" + name + "' (identifiers must be double-quoted)");
            }
        } else if (c == '(') {
            t.type = Term::Type::Tuple;
            advance();
            t.args = parse_args();
        } else {
            fail(t.pos, std::string("unexpected character '") + c + "'");
        }
        return t;
    }

    // Comma-separated terms up to and including the closing parenthesis.
    std::vector<Term> parse_args() {
        std::vector<Term> args;
        for (;;) {
            args.push_back(parse_term());
            skip_space();
            if (at_end()) fail(pos_, "unexpected end of input");
            if (peek() == ',') {
                advance();
                continue;
            }
            if (peek() == ')') {
                advance();
                return args;
            }
            fail(pos_, "expected ',' or ')'");
        }
    }

    std::string_view text_;
    std::size_t offset_ = 0;
    Pos pos_;
};

inline const std::string& as_string(const Term& t, const char* what) {
    if (t.type != Term::Type::String) FactReader::fail(t.pos, std::string(what) + " must be a quoted string");
    return t.text;
}

inline std::int64_t as_integer(const Term& t, const char* what) {
    if (t.type != Term::Type::Int) FactReader::fail(t.pos, std::string(what) + " must be an integer");
    return t.number;
}

inline AttrValue as_value(const Term& t) {
    if (t.type == Term::Type::Int) return AttrValue(t.number);
    if (t.type == Term::Type::Bool) return AttrValue(t.boolean);
    FactReader::fail(t.pos, "attribute value must be an integer, true or false");
}

inline ReqTarget as_target(const Term& t) {
    if (t.type == Term::Type::String) return t.text;
    if (t.type == Term::Type::Tuple && t.args.size() == 2) {
        const auto& a = as_string(t.args[0], "service");
        const auto& b = as_string(t.args[1], "service");
        if (a == b) FactReader::fail(t.pos, "link requirement pairs service " + quote_id(a) + " with itself");
        return ServicePair{a, b};
    }
    FactReader::fail(t.pos, "requirement target must be \"service\" or (\"service\",\"service\")");
}

inline RequirementExpr as_expr(const Term& t) {
    if (t.type != Term::Type::Func) FactReader::fail(t.pos, "expected a requirement expression");
    auto kind = kind_from_name(t.text);
    if (!kind) FactReader::fail(t.pos, "unknown requirement kind '" + t.text + "'");
    if (t.args.size() != 2)
        FactReader::fail(t.pos, "requirement '" + t.text + "' takes 2 arguments, got " + std::to_string(t.args.size()));
    RequirementExpr e{*kind, as_string(t.args[0], "attribute key"), as_value(t.args[1])};
    try {
        e.validate();
    } catch (const std::invalid_argument& ex) {
        FactReader::fail(t.pos, ex.what());
    }
    return e;
}

}  // namespace detail

/// Parses a fact stream into a normalized instance.  Throws ParseError.
inline Instance parse_facts(std::string_view text, const ParseOptions& options = {}) {
    using detail::FactReader;
    using detail::Pos;
    using detail::Term;

    Instance inst;
    auto& infra = inst.infra;
    auto& app = inst.app;

    struct SoftDecl {
        std::optional<std::int64_t> level;
        Pos pos;
    };
    struct CostDecl {
        SoftParams params;
        Pos pos;
    };
    std::map<Requirement, SoftDecl> softs;
    std::map<Requirement, CostDecl> costs;
    std::map<Requirement, Pos> hards;
    std::vector<std::pair<NodeId, Pos>> node_refs;
    std::vector<std::pair<ServiceId, Pos>> service_refs;

    auto arity = [](const Term& f, std::size_t n) {
        if (f.args.size() != n)
            FactReader::fail(f.pos, "predicate " + f.text + "/" + std::to_string(f.args.size()) +
                                        " has wrong arity, expected " + f.text + "/" + std::to_string(n));
    };
    auto refer_target = [&](const ReqTarget& t, Pos p) {
        if (const auto* pr = std::get_if<ServicePair>(&t)) {
            service_refs.emplace_back(pr->first, p);
            service_refs.emplace_back(pr->second, p);
        } else {
            service_refs.emplace_back(std::get<ServiceId>(t), p);
        }
    };

    FactReader reader(text);
    Term f;
    while (reader.next(f)) {
        const auto& p = f.text;
        if (p == "node") {
            arity(f, 1);
            infra.nodes.insert(detail::as_string(f.args[0], "node"));
        } else if (p == "link") {
            arity(f, 2);
            const auto& a = detail::as_string(f.args[0], "node");
            const auto& b = detail::as_string(f.args[1], "node");
            infra.links.emplace(a, b);
            node_refs.emplace_back(a, f.pos);
            node_refs.emplace_back(b, f.pos);
        } else if (p == "node_attr") {
            arity(f, 3);
            const auto& n = detail::as_string(f.args[0], "node");
            const auto& k = detail::as_string(f.args[1], "attribute key");
            auto v = detail::as_value(f.args[2]);
            auto [it, fresh] = infra.node_attrs.emplace(std::pair{n, k}, v);
            if (!fresh && it->second != v)
                FactReader::fail(f.pos, "conflicting value for attribute " + quote_id(k) + " on node " + quote_id(n) +
                                            ": " + it->second.to_string() + " vs " + v.to_string());
            node_refs.emplace_back(n, f.pos);
        } else if (p == "link_attr") {
            arity(f, 4);
            const auto& a = detail::as_string(f.args[0], "node");
            const auto& b = detail::as_string(f.args[1], "node");
            const auto& k = detail::as_string(f.args[2], "attribute key");
            auto v = detail::as_value(f.args[3]);
            auto [it, fresh] = infra.link_attrs.emplace(std::tuple{a, b, k}, v);
            if (!fresh && it->second != v)
                FactReader::fail(f.pos, "conflicting value for attribute " + quote_id(k) + " on link " + quote_id(a) +
                                            "->" + quote_id(b) + ": " + it->second.to_string() + " vs " +
                                            v.to_string());
            node_refs.emplace_back(a, f.pos);
            node_refs.emplace_back(b, f.pos);
        } else if (p == "service") {
            arity(f, 1);
            app.services.insert(detail::as_string(f.args[0], "service"));
        } else if (p == "dependency") {
            arity(f, 2);
            const auto& a = detail::as_string(f.args[0], "service");
            const auto& b = detail::as_string(f.args[1], "service");
            app.dependencies.emplace(a, b);
            service_refs.emplace_back(a, f.pos);
            service_refs.emplace_back(b, f.pos);
        } else if (p == "hreq") {
            arity(f, 2);
            Requirement r{detail::as_target(f.args[0]), detail::as_expr(f.args[1])};
            refer_target(r.target, f.pos);
            hards.emplace(std::move(r), f.pos);
        } else if (p == "sreq") {
            if (f.args.size() != 2 && f.args.size() != 3)
                FactReader::fail(f.pos, "predicate sreq/" + std::to_string(f.args.size()) +
                                            " has wrong arity, expected sreq/2 or sreq/3");
            Requirement r{detail::as_target(f.args[0]), detail::as_expr(f.args[1])};
            std::optional<std::int64_t> level;
            if (f.args.size() == 3) {
                level = detail::as_integer(f.args[2], "priority level");
                if (*level < 0) FactReader::fail(f.args[2].pos, "priority level must be non-negative");
            }
            refer_target(r.target, f.pos);
            auto [it, fresh] = softs.emplace(r, SoftDecl{level, f.pos});
            if (!fresh && level) {
                if (it->second.level && *it->second.level != *level)
                    FactReader::fail(f.pos, "conflicting priority levels for sreq(" + to_string(r) + ")");
                it->second.level = level;
            }
        } else if (p == "violation_cost") {
            arity(f, 3);
            Requirement r{detail::as_target(f.args[0]), detail::as_expr(f.args[1])};
            const auto& pair = f.args[2];
            if (pair.type != Term::Type::Tuple || pair.args.size() != 2)
                FactReader::fail(pair.pos, "violation cost must be a (Weight,Level) pair");
            SoftParams params{detail::as_integer(pair.args[0], "weight"), detail::as_integer(pair.args[1], "level")};
            if (params.weight < 0 || params.level < 0)
                FactReader::fail(pair.pos, "weight and level must be non-negative");
            auto [it, fresh] = costs.emplace(r, CostDecl{params, f.pos});
            if (!fresh && it->second.params != params)
                FactReader::fail(f.pos, "conflicting violation_cost for " + to_string(r));
        } else {
            FactReader::fail(f.pos, "unknown predicate " + p + "/" + std::to_string(f.args.size()));
        }
    }

    for (const auto& [n, pos] : node_refs)
        if (!infra.nodes.count(n)) FactReader::fail(pos, "reference to undeclared node " + quote_id(n));
    for (const auto& [s, pos] : service_refs)
        if (!app.services.count(s)) FactReader::fail(pos, "requirement references undeclared service " + quote_id(s));

    for (const auto& [r, pos] : hards) {
        if (softs.count(r)) FactReader::fail(pos, "requirement " + to_string(r) + " is declared both hard and soft");
        app.hard_reqs.insert(r);
    }
    for (const auto& [r, decl] : costs)
        if (!softs.count(r)) FactReader::fail(decl.pos, "violation_cost without a matching sreq: " + to_string(r));
    for (const auto& [r, decl] : softs) {
        SoftParams params{options.strict ? 0 : 1, decl.level.value_or(1)};
        if (auto it = costs.find(r); it != costs.end()) params = it->second.params;
        app.soft_reqs.emplace(r, params);
    }
    return inst;
}

inline Instance parse_facts(std::istream& in, const ParseOptions& options = {}) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_facts(std::string_view(text), options);
}

/// Writes facts grouped as nodes, links, node attributes, link attributes,
/// services, dependencies, hard requirements, soft requirements and
/// violation costs, each group in ascending order.  Every soft requirement
/// gets an explicit violation_cost so the output re-parses identically in
/// strict mode too.
inline void serialize_facts(std::ostream& out, const Instance& inst) {
    const auto& infra = inst.infra;
    const auto& app = inst.app;
    for (const auto& n : infra.nodes) out << "node(" << quote_id(n) << ").\n";
    for (const auto& [a, b] : infra.links) out << "link(" << quote_id(a) << "," << quote_id(b) << ").\n";
    for (const auto& [k, v] : infra.node_attrs)
        out << "node_attr(" << quote_id(k.first) << "," << quote_id(k.second) << "," << v.to_string() << ").\n";
    for (const auto& [k, v] : infra.link_attrs)
        out << "link_attr(" << quote_id(std::get<0>(k)) << "," << quote_id(std::get<1>(k)) << ","
            << quote_id(std::get<2>(k)) << "," << v.to_string() << ").\n";
    for (const auto& s : app.services) out << "service(" << quote_id(s) << ").\n";
    for (const auto& [a, b] : app.dependencies) out << "dependency(" << quote_id(a) << "," << quote_id(b) << ").\n";
    for (const auto& r : app.hard_reqs) out << "hreq(" << to_string(r) << ").\n";
    for (const auto& [r, p] : app.soft_reqs) out << "sreq(" << to_string(r) << "," << p.level << ").\n";
    for (const auto& [r, p] : app.soft_reqs)
        out << "violation_cost(" << to_string(r) << ",(" << p.weight << "," << p.level << ")).\n";
}

inline std::string serialize_facts(const Instance& inst) {
    std::ostringstream out;
    serialize_facts(out, inst);
    return out.str();
}

}  // namespace relaxplace

#endif  // RELAXPLACE_FACTS_HPP
