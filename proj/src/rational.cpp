#include "lcqmac/rational.hpp"

#include <sstream>

namespace lcqmac {

Rational parse_rational(const std::string& text) {
    std::string s = text;
    // mpq_class's own parser accepts "a/b" but not surrounding spaces.
    size_t begin = s.find_first_not_of(" \t");
    size_t end = s.find_last_not_of(" \t");
    if (begin == std::string::npos) throw ParseError("empty rational literal");
    s = s.substr(begin, end - begin + 1);
    try {
        Rational r(s, 10);
        if (r.get_den() == 0) throw ParseError("rational with zero denominator: " + text);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal: " + text);
    }
}

std::string to_string(const Rational& value) {
    std::ostringstream out;
    if (value.get_den() == 1) {
        out << value.get_num();
    } else {
        out << value.get_num() << '/' << value.get_den();
    }
    return out.str();
}

QVector parse_rational_csv(const std::string& text) {
    QVector out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) throw ParseError("empty rational list: " + text);
    return out;
}

}  // namespace lcqmac
