#include "procmine/tpn.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "procmine/error.hpp"

namespace procmine {

namespace {

void append_place_list(std::string& out, const PetriNet& net, const std::vector<PlaceIndex>& list) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        out += i ? ", " : " ";
        out += net.places()[list[i]];
    }
}

enum class TokKind { word, quoted, comma, semicolon, end };

struct Token {
    TokKind kind;
    std::string text;
    std::size_t line;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    Token next() {
        skip_space();
        if (pos_ >= s_.size()) return {TokKind::end, "", line_};
        char c = s_[pos_];
        if (c == ',') return {TokKind::comma, (++pos_, ","), line_};
        if (c == ';') return {TokKind::semicolon, (++pos_, ";"), line_};
        if (c == '"') {
            std::size_t start_line = line_;
            auto close = s_.find('"', pos_ + 1);
            if (close == std::string_view::npos) throw ParseError("unterminated quoted name", start_line);
            std::string text(s_.substr(pos_ + 1, close - pos_ - 1));
            if (text.find('\n') != std::string::npos) throw ParseError("newline inside quoted name", start_line);
            pos_ = close + 1;
            return {TokKind::quoted, std::move(text), start_line};
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != ',' &&
               s_[pos_] != ';' && s_[pos_] != '"') {
            ++pos_;
        }
        return {TokKind::word, std::string(s_.substr(start, pos_ - start)), line_};
    }

private:
    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            if (s_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) { advance(); }

    PetriNet run() {
        while (cur_.kind != TokKind::end) {
            if (is_word("place")) {
                place();
            } else if (is_word("trans")) {
                transition();
            } else {
                throw ParseError("expected 'place' or 'trans', found '" + cur_.text + "'", cur_.line);
            }
        }
        return std::move(net_);
    }

private:
    bool is_word(std::string_view w) const { return cur_.kind == TokKind::word && cur_.text == w; }
    void advance() { cur_ = lex_.next(); }

    void expect_semicolon() {
        if (cur_.kind != TokKind::semicolon) throw ParseError("expected ';'", cur_.line);
        advance();
    }

    void place() {
        if (seen_transition_) throw ParseError("place declared after the first transition", cur_.line);
        advance();
        if (cur_.kind != TokKind::word && cur_.kind != TokKind::quoted) throw ParseError("expected place name", cur_.line);
        std::string name = cur_.text;
        std::size_t line = cur_.line;
        advance();
        std::uint32_t tokens = 0;
        if (is_word("init")) {
            advance();
            if (cur_.kind != TokKind::word) throw ParseError("expected token count after 'init'", cur_.line);
            const auto& t = cur_.text;
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), tokens);
            if (ec != std::errc{} || ptr != t.data() + t.size()) {
                throw ParseError("invalid token count '" + t + "'", cur_.line);
            }
            advance();
        }
        expect_semicolon();
        if (net_.find_place(name)) throw ParseError("duplicate place '" + name + "'", line);
        net_.add_place(name, tokens);
    }

    std::vector<PlaceIndex> place_list() {
        std::vector<PlaceIndex> list;
        while (true) {
            if (cur_.kind != TokKind::word && cur_.kind != TokKind::quoted) throw ParseError("expected place name", cur_.line);
            auto idx = net_.find_place(cur_.text);
            if (!idx) throw ParseError("reference to undeclared place '" + cur_.text + "'", cur_.line);
            for (auto p : list) {
                if (p == *idx) throw ParseError("place '" + cur_.text + "' listed twice", cur_.line);
            }
            list.push_back(*idx);
            advance();
            if (cur_.kind != TokKind::comma) break;
            advance();
        }
        return list;
    }

    void transition() {
        seen_transition_ = true;
        advance();
        if (cur_.kind != TokKind::word && cur_.kind != TokKind::quoted) {
            throw ParseError("expected transition name", cur_.line);
        }
        bool quoted = cur_.kind == TokKind::quoted;
        std::string name = cur_.text;
        advance();
        std::vector<PlaceIndex> in, out;
        if (is_word("in")) {
            advance();
            in = place_list();
        }
        if (is_word("out")) {
            advance();
            out = place_list();
        }
        expect_semicolon();
        net_.add_transition(std::move(name), std::move(in), std::move(out), quoted);
    }

    Lexer lex_;
    Token cur_{TokKind::end, "", 0};
    PetriNet net_;
    bool seen_transition_ = false;
};

}  // namespace

std::string emit_tpn(const PetriNet& net) {
    std::string out;
    for (PlaceIndex p = 0; p < net.places().size(); ++p) {
        out += "place ";
        out += net.places()[p];
        if (auto n = net.initial_marking().tokens[p]; n > 0) {
            out += " init ";
            out += std::to_string(n);
        }
        out += ";\n";
    }
    for (const auto& t : net.transitions()) {
        out += "trans ";
        out += t.quoted ? "\"" + t.name + "\"" : t.name;
        if (!t.inputs.empty()) {
            out += "\n  in";
            append_place_list(out, net, t.inputs);
        }
        if (!t.outputs.empty()) {
            out += "\n  out";
            append_place_list(out, net, t.outputs);
        }
        out += ";\n";
    }
    return out;
}

PetriNet parse_tpn(std::string_view text) { return Parser(text).run(); }

}  // namespace procmine
