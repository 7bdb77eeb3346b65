// Textual descriptions of Young functions.

#include "philab/young.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string_view>

namespace philab {

namespace {

std::string format_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string join(std::span<const double> xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_number(xs[i]);
    }
    return out;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    YoungFunction parse_all() {
        YoungFunction y = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return y;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string &why) const {
        throw ValidationError("bad Young spec '" + std::string(text_) + "' at " + std::to_string(pos_) + ": " + why);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    double number() {
        skip_ws();
        const std::string rest(text_.substr(pos_));
        char *end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("expected a number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return v;
    }

    // Optional "w*" prefix inside sum(...).
    double weight() {
        skip_ws();
        std::size_t save = pos_;
        if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            double w = number();
            if (accept('*')) return w;
        }
        pos_ = save;
        return 1.0;
    }

    YoungFunction expr() {
        const std::string name = identifier();
        if (name.empty()) fail("expected a family name");
        if (name == "product" || name == "compose" || name == "sum") {
            expect('(');
            const double w1 = name == "sum" ? weight() : 1.0;
            YoungFunction a = expr();
            expect(',');
            const double w2 = name == "sum" ? weight() : 1.0;
            YoungFunction b = expr();
            expect(')');
            if (name == "product") return YoungFunction::product(a, b);
            if (name == "compose") return YoungFunction::composition(a, b);
            return YoungFunction::sum(w1, a, w2, b);
        }
        std::size_t n = 0;
        if (name == "power") n = 1;
        else if (name == "powerlog" || name == "spliced") n = 3;
        else fail("unknown family '" + name + "'");
        expect(':');
        std::vector<double> args{number()};
        while (args.size() < n) {
            expect(',');
            args.push_back(number());
        }
        if (name == "power") return YoungFunction::power(args[0]);
        if (name == "powerlog") return YoungFunction::power_log(args[0], args[1], args[2]);
        return YoungFunction::spliced(args[0], args[1], args[2]);
    }
};

} // namespace

YoungFunction parse_young(const std::string &text) { return Parser(text).parse_all(); }

std::string YoungFunction::spec() const {
    switch (family()) {
    case YoungFamily::power: return "power:" + join(params());
    case YoungFamily::power_log: return "powerlog:" + join(params());
    case YoungFamily::spliced: return "spliced:" + join(params());
    case YoungFamily::sum: {
        const auto ops = operands();
        return "sum(" + format_number(weights()[0]) + "*" + ops[0].spec() + "," + format_number(weights()[1]) + "*" +
               ops[1].spec() + ")";
    }
    case YoungFamily::product: {
        const auto ops = operands();
        return "product(" + ops[0].spec() + "," + ops[1].spec() + ")";
    }
    case YoungFamily::composition: {
        const auto ops = operands();
        return "compose(" + ops[0].spec() + "," + ops[1].spec() + ")";
    }
    }
    return {};
}

} // namespace philab
