#include "glass/json_canon.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "glass/errors.hpp"

namespace glass {

std::string format_number(double v) {
    if (!std::isfinite(v)) throw InputError("json: non-finite number");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

Json Json::boolean(bool b) {
    Json j;
    j.kind_ = Kind::Bool;
    j.bool_ = b;
    return j;
}

Json Json::integer(std::int64_t v) {
    Json j;
    j.kind_ = Kind::Int;
    j.int_ = v;
    return j;
}

Json Json::number(double v) {
    if (!std::isfinite(v)) throw InputError("json: non-finite number");
    Json j;
    j.kind_ = Kind::Double;
    j.double_ = v;
    return j;
}

Json Json::string(std::string s) {
    Json j;
    j.kind_ = Kind::String;
    j.string_ = std::move(s);
    return j;
}

Json Json::array() {
    Json j;
    j.kind_ = Kind::Array;
    return j;
}

Json Json::object() {
    Json j;
    j.kind_ = Kind::Object;
    return j;
}

Json& Json::push(Json v) {
    if (kind_ != Kind::Array) throw InputError("json: push on a non-array");
    items_.push_back(std::move(v));
    return *this;
}

Json& Json::set(const std::string& key, Json v) {
    if (kind_ != Kind::Object) throw InputError("json: set on a non-object");
    fields_[key] = std::move(v);
    return *this;
}

bool Json::has(const std::string& key) const {
    return kind_ == Kind::Object && fields_.count(key) > 0;
}

const Json& Json::at(const std::string& key) const {
    const auto it = fields_.find(key);
    if (kind_ != Kind::Object || it == fields_.end()) {
        throw ParseError("json: missing field '" + key + "'");
    }
    return it->second;
}

bool Json::as_bool() const {
    if (kind_ != Kind::Bool) throw ParseError("json: expected a boolean");
    return bool_;
}

std::int64_t Json::as_int() const {
    if (kind_ != Kind::Int) throw ParseError("json: expected an integer");
    return int_;
}

double Json::as_double() const {
    if (kind_ == Kind::Int) return static_cast<double>(int_);
    if (kind_ != Kind::Double) throw ParseError("json: expected a number");
    return double_;
}

const std::string& Json::as_string() const {
    if (kind_ != Kind::String) throw ParseError("json: expected a string");
    return string_;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
    out.push_back('"');
    for (unsigned char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (ch < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(ch));
                }
        }
    }
    out.push_back('"');
}

void indent_to(std::string& out, int indent) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
}

} // namespace

void Json::write(std::string& out, int indent) const {
    switch (kind_) {
        case Kind::Null:
            out += "null";
            break;
        case Kind::Bool:
            out += bool_ ? "true" : "false";
            break;
        case Kind::Int: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(int_));
            out += buf;
            break;
        }
        case Kind::Double:
            out += format_number(double_);
            break;
        case Kind::String:
            append_escaped(out, string_);
            break;
        case Kind::Array: {
            if (items_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < items_.size(); ++i) {
                indent_to(out, indent + 1);
                items_[i].write(out, indent + 1);
                if (i + 1 < items_.size()) out.push_back(',');
                out.push_back('\n');
            }
            indent_to(out, indent);
            out.push_back(']');
            break;
        }
        case Kind::Object: {
            if (fields_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& [key, value] : fields_) {
                indent_to(out, indent + 1);
                append_escaped(out, key);
                out += ": ";
                value.write(out, indent + 1);
                if (++i < fields_.size()) out.push_back(',');
                out.push_back('\n');
            }
            indent_to(out, indent);
            out.push_back('}');
            break;
        }
    }
}

std::string Json::dump() const {
    std::string out;
    write(out, 0);
    out.push_back('\n');
    return out;
}

namespace {

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("json: " + why + " at offset " + std::to_string(pos));
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    char peek() {
        if (pos >= text.size()) fail("unexpected end of input");
        return text[pos];
    }

    void expect(char ch) {
        if (peek() != ch) fail(std::string("expected '") + ch + "'");
        ++pos;
    }

    bool consume_literal(const char* lit) {
        const std::size_t len = std::char_traits<char>::length(lit);
        if (text.compare(pos, len, lit) == 0) {
            pos += len;
            return true;
        }
        return false;
    }

    Json parse_value() {
        skip_ws();
        const char ch = peek();
        if (ch == '{') return parse_object();
        if (ch == '[') return parse_array();
        if (ch == '"') return Json::string(parse_string());
        if (consume_literal("true")) return Json::boolean(true);
        if (consume_literal("false")) return Json::boolean(false);
        if (consume_literal("null")) return Json();
        return parse_number();
    }

    std::string parse_string() {
        expect('"');
        std::string out;
        while (true) {
            if (pos >= text.size()) fail("unterminated string");
            const char ch = text[pos++];
            if (ch == '"') break;
            if (ch == '\\') {
                if (pos >= text.size()) fail("unterminated escape");
                const char esc = text[pos++];
                switch (esc) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case '/': out.push_back('/'); break;
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case 'u': {
                        if (pos + 4 > text.size()) fail("short unicode escape");
                        unsigned code = 0;
                        for (int i = 0; i < 4; ++i) {
                            const char hex = text[pos++];
                            code <<= 4;
                            if (hex >= '0' && hex <= '9') code += hex - '0';
                            else if (hex >= 'a' && hex <= 'f') code += hex - 'a' + 10;
                            else if (hex >= 'A' && hex <= 'F') code += hex - 'A' + 10;
                            else fail("bad unicode escape");
                        }
                        if (code > 0x7f) fail("non-ascii escapes are not supported");
                        out.push_back(static_cast<char>(code));
                        break;
                    }
                    default: fail("unknown escape");
                }
            } else {
                out.push_back(ch);
            }
        }
        return out;
    }

    Json parse_number() {
        const std::size_t start = pos;
        if (peek() == '-') ++pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                text[pos] == 'e' || text[pos] == 'E' || text[pos] == '+' || text[pos] == '-')) {
            ++pos;
        }
        const std::string lit = text.substr(start, pos - start);
        if (lit.empty() || lit == "-") fail("bad number");
        if (lit.find_first_of(".eE") == std::string::npos) {
            errno = 0;
            char* end = nullptr;
            const long long v = std::strtoll(lit.c_str(), &end, 10);
            if (errno == 0 && end == lit.c_str() + lit.size()) {
                return Json::integer(v);
            }
        }
        char* end = nullptr;
        const double v = std::strtod(lit.c_str(), &end);
        if (end != lit.c_str() + lit.size() || !std::isfinite(v)) fail("bad number");
        return Json::number(v);
    }

    Json parse_array() {
        expect('[');
        Json arr = Json::array();
        skip_ws();
        if (peek() == ']') {
            ++pos;
            return arr;
        }
        while (true) {
            arr.push(parse_value());
            skip_ws();
            const char ch = peek();
            if (ch == ',') {
                ++pos;
                continue;
            }
            if (ch == ']') {
                ++pos;
                return arr;
            }
            fail("expected ',' or ']'");
        }
    }

    Json parse_object() {
        expect('{');
        Json obj = Json::object();
        skip_ws();
        if (peek() == '}') {
            ++pos;
            return obj;
        }
        while (true) {
            skip_ws();
            std::string key = parse_string();
            skip_ws();
            expect(':');
            obj.set(key, parse_value());
            skip_ws();
            const char ch = peek();
            if (ch == ',') {
                ++pos;
                continue;
            }
            if (ch == '}') {
                ++pos;
                return obj;
            }
            fail("expected ',' or '}'");
        }
    }
};

} // namespace

Json Json::parse(const std::string& text) {
    Parser p(text);
    Json v = p.parse_value();
    p.skip_ws();
    if (p.pos != text.size()) {
        throw ParseError("json: trailing content at offset " + std::to_string(p.pos));
    }
    return v;
}

} // namespace glass
