#pragma once

/// Insertion-ordered JSON document model with deterministic output.
///
/// Reports must be byte-identical across runs for the same config, so this
/// writer fixes key order (insertion order), float formatting (%.17g — the
/// shortest form that still round-trips doubles is not stable across
/// libraries, 17 significant digits always is), and maps non-finite
/// doubles to null (JSON has no inf/nan; a null lower-bound log means
/// "underflowed past the double range").

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace paralattice {

class JsonValue {
  public:
    enum class Kind { Null, Bool, Int, Double, String, Array, Object };

    JsonValue() : kind_(Kind::Null) {}
    JsonValue(bool b) : kind_(Kind::Bool), bool_(b) {}
    JsonValue(int v) : kind_(Kind::Int), int_(v) {}
    JsonValue(long v) : kind_(Kind::Int), int_(v) {}
    JsonValue(long long v) : kind_(Kind::Int), int_(v) {}
    JsonValue(double v) : kind_(Kind::Double), double_(v) {}
    JsonValue(const char* s) : kind_(Kind::String), string_(s) {}
    JsonValue(std::string s) : kind_(Kind::String), string_(std::move(s)) {}

    static JsonValue array() {
        JsonValue v;
        v.kind_ = Kind::Array;
        return v;
    }
    static JsonValue object() {
        JsonValue v;
        v.kind_ = Kind::Object;
        return v;
    }

    [[nodiscard]] Kind kind() const { return kind_; }

    /// Appends to an array (converts a Null value into an array first).
    JsonValue& push(JsonValue v) {
        if (kind_ == Kind::Null) kind_ = Kind::Array;
        items_.push_back(std::move(v));
        return *this;
    }

    /// Sets an object member, preserving first-insertion order on
    /// overwrite (converts a Null value into an object first).
    JsonValue& set(const std::string& key, JsonValue v) {
        if (kind_ == Kind::Null) kind_ = Kind::Object;
        for (auto& kv : members_)
            if (kv.first == key) {
                kv.second = std::move(v);
                return *this;
            }
        members_.emplace_back(key, std::move(v));
        return *this;
    }

    [[nodiscard]] std::string dump(int indent = 2) const {
        std::string out;
        write(out, indent, 0);
        return out;
    }

  private:
    static void append_escaped(std::string& out, const std::string& s) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\r': out += "\\r"; break;
                case '\t': out += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    static void append_double(std::string& out, double v) {
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
    }

    void write(std::string& out, int indent, int depth) const {
        const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
        const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
        switch (kind_) {
            case Kind::Null: out += "null"; break;
            case Kind::Bool: out += bool_ ? "true" : "false"; break;
            case Kind::Int: out += std::to_string(int_); break;
            case Kind::Double: append_double(out, double_); break;
            case Kind::String: append_escaped(out, string_); break;
            case Kind::Array: {
                if (items_.empty()) {
                    out += "[]";
                    break;
                }
                out += "[\n";
                for (std::size_t i = 0; i < items_.size(); ++i) {
                    out += pad;
                    items_[i].write(out, indent, depth + 1);
                    if (i + 1 < items_.size()) out += ',';
                    out += '\n';
                }
                out += close_pad + "]";
                break;
            }
            case Kind::Object: {
                if (members_.empty()) {
                    out += "{}";
                    break;
                }
                out += "{\n";
                for (std::size_t i = 0; i < members_.size(); ++i) {
                    out += pad;
                    append_escaped(out, members_[i].first);
                    out += ": ";
                    members_[i].second.write(out, indent, depth + 1);
                    if (i + 1 < members_.size()) out += ',';
                    out += '\n';
                }
                out += close_pad + "}";
                break;
            }
        }
    }

    Kind kind_;
    bool bool_ = false;
    long long int_ = 0;
    double double_ = 0.0;
    std::string string_;
    std::vector<JsonValue> items_;
    std::vector<std::pair<std::string, JsonValue>> members_;
};

/// Array-of-arrays for a square matrix.
inline JsonValue json_from_rows(const double* data, int rows, int cols) {
    JsonValue m = JsonValue::array();
    for (int i = 0; i < rows; ++i) {
        JsonValue row = JsonValue::array();
        for (int j = 0; j < cols; ++j) row.push(data[i * cols + j]);
        m.push(std::move(row));
    }
    return m;
}

template <typename T>
JsonValue json_from_list(const std::vector<T>& xs) {
    JsonValue a = JsonValue::array();
    for (const T& x : xs) a.push(JsonValue(x));
    return a;
}

} // namespace paralattice
