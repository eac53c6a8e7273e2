#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace glass {

// Minimal JSON document model with one canonical serialization: object keys
// sorted, numbers printed with up to nine significant digits ("%.9g"),
// two-space indentation, "\n" line ends. Two semantically equal documents
// always serialize to identical bytes, which is what the golden-file and
// rerun-determinism checks compare.
class Json {
public:
    enum class Kind { Null, Bool, Int, Double, String, Array, Object };

    Json() : kind_(Kind::Null) {}
    static Json boolean(bool b);
    static Json integer(std::int64_t v);
    static Json number(double v);  // throws InputError on non-finite values
    static Json string(std::string s);
    static Json array();
    static Json object();

    Kind kind() const { return kind_; }

    // Array ops.
    Json& push(Json v);
    const std::vector<Json>& items() const { return items_; }

    // Object ops; set replaces.
    Json& set(const std::string& key, Json v);
    bool has(const std::string& key) const;
    const Json& at(const std::string& key) const;  // throws ParseError when absent
    const std::map<std::string, Json>& fields() const { return fields_; }

    // Accessors with type checks (ParseError on mismatch).
    bool as_bool() const;
    std::int64_t as_int() const;
    double as_double() const;  // accepts Int too
    const std::string& as_string() const;

    std::string dump() const;  // canonical bytes, trailing newline included

    static Json parse(const std::string& text);  // throws ParseError

private:
    Kind kind_;
    bool bool_ = false;
    std::int64_t int_ = 0;
    double double_ = 0.0;
    std::string string_;
    std::vector<Json> items_;
    std::map<std::string, Json> fields_;

    void write(std::string& out, int indent) const;
};

// Canonical number formatting used everywhere a float reaches text output.
std::string format_number(double v);

} // namespace glass
