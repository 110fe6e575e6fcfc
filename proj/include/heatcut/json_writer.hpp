#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace heatcut {

// Minimal JSON value with insertion-ordered objects and fixed 17-significant-
// digit float formatting, so identical runs serialize byte-identically.
class Json {
public:
    Json() : value_(nullptr) {}
    Json(bool b) : value_(b) {}
    Json(int v) : value_(static_cast<int64_t>(v)) {}
    Json(long v) : value_(static_cast<int64_t>(v)) {}
    Json(long long v) : value_(static_cast<int64_t>(v)) {}
    Json(uint64_t v) : value_(static_cast<int64_t>(v)) {}
    Json(double v) : value_(v) {}
    Json(const char* s) : value_(std::string(s)) {}
    Json(std::string s) : value_(std::move(s)) {}

    static Json array() {
        Json j;
        j.value_ = Array{};
        return j;
    }
    static Json object() {
        Json j;
        j.value_ = Object{};
        return j;
    }

    Json& push_back(Json v) {
        std::get<Array>(value_).items.push_back(std::move(v));
        return *this;
    }
    Json& set(const std::string& key, Json v) {
        std::get<Object>(value_).items.emplace_back(key, std::move(v));
        return *this;
    }

    std::string dump() const {
        std::string out;
        write(out);
        return out;
    }

private:
    struct Array {
        std::vector<Json> items;
    };
    struct Object {
        std::vector<std::pair<std::string, Json>> items;
    };
    using Value =
        std::variant<std::nullptr_t, bool, int64_t, double, std::string, Array, Object>;

    static void write_string(const std::string& s, std::string& out) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
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

    void write(std::string& out) const {
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            out += "null";
        } else if (const bool* b = std::get_if<bool>(&value_)) {
            out += *b ? "true" : "false";
        } else if (const int64_t* i = std::get_if<int64_t>(&value_)) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%" PRId64, *i);
            out += buf;
        } else if (const double* d = std::get_if<double>(&value_)) {
            if (!std::isfinite(*d)) {
                out += "null";
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", *d);
                out += buf;
            }
        } else if (const std::string* s = std::get_if<std::string>(&value_)) {
            write_string(*s, out);
        } else if (const Array* a = std::get_if<Array>(&value_)) {
            out += '[';
            for (std::size_t i = 0; i < a->items.size(); ++i) {
                if (i) out += ',';
                a->items[i].write(out);
            }
            out += ']';
        } else if (const Object* o = std::get_if<Object>(&value_)) {
            out += '{';
            for (std::size_t i = 0; i < o->items.size(); ++i) {
                if (i) out += ',';
                write_string(o->items[i].first, out);
                out += ':';
                o->items[i].second.write(out);
            }
            out += '}';
        }
    }

    Value value_;
};

}  // namespace heatcut
