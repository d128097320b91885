#include "mchain/io.hpp"

#include <fstream>
#include <sstream>

#include "mchain/generators.hpp"
#include "mchain/gnm.hpp"
#include "mchain/torus.hpp"

namespace mchain {

std::size_t ChainDoc::n() const {
    return exact() ? as_exact().n() : as_float().n();
}

MarkovChain<Rat> ChainDoc::to_exact() const {
    if (!exact()) throw ConfigError("operation requires an exact-mode chain");
    return as_exact();
}

MarkovChain<double> ChainDoc::to_float() const {
    if (!exact()) return as_float();
    return mchain::to_float(as_exact());
}

namespace {

void reject_unknown_keys(const nlohmann::json& doc, std::initializer_list<const char*> allowed) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known) throw ConfigError("unknown key '" + it.key() + "'");
    }
}

}  // namespace

ChainDoc chain_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("chain document must be a JSON object");
    reject_unknown_keys(doc, {"states", "mode", "rows"});
    if (!doc.contains("states") || !doc.contains("mode") || !doc.contains("rows"))
        throw ConfigError("chain document needs 'states', 'mode' and 'rows'");
    if (!doc["states"].is_number_integer() || doc["states"].get<long long>() < 0)
        throw ConfigError("'states' must be a nonnegative integer");
    const std::size_t n = doc["states"].get<std::size_t>();
    const std::string mode = doc["mode"].get<std::string>();
    if (mode != "exact" && mode != "float") throw ConfigError("mode must be 'exact' or 'float'");
    const auto& rows = doc["rows"];
    if (!rows.is_array() || rows.size() != n) throw ConfigError("'rows' must be an array of length 'states'");

    try {
        if (mode == "exact") {
            Matrix<Rat> m(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                if (!rows[i].is_array() || rows[i].size() != n) throw ConfigError("row length mismatch");
                for (std::size_t j = 0; j < n; ++j) {
                    if (!rows[i][j].is_string())
                        throw ConfigError("exact-mode entries must be \"p/q\" strings");
                    m(i, j) = parse_rational(rows[i][j].get<std::string>());
                }
            }
            return ChainDoc{mode, MarkovChain<Rat>(std::move(m))};
        }
        Matrix<double> m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!rows[i].is_array() || rows[i].size() != n) throw ConfigError("row length mismatch");
            for (std::size_t j = 0; j < n; ++j) {
                if (!rows[i][j].is_number()) throw ConfigError("float-mode entries must be numbers");
                m(i, j) = rows[i][j].get<double>();
            }
        }
        return ChainDoc{mode, MarkovChain<double>(std::move(m))};
    } catch (const InvalidParams& e) {
        throw ConfigError(std::string("invalid chain: ") + e.what());
    }
}

nlohmann::json chain_to_json(const MarkovChain<Rat>& chain) {
    nlohmann::json doc;
    doc["states"] = chain.n();
    doc["mode"] = "exact";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < chain.n(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < chain.n(); ++j) row.push_back(to_string(chain.prob(i, j)));
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

nlohmann::json chain_to_json(const MarkovChain<double>& chain) {
    nlohmann::json doc;
    doc["states"] = chain.n();
    doc["mode"] = "float";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < chain.n(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < chain.n(); ++j) row.push_back(chain.prob(i, j));
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

namespace {

std::vector<std::string> split_args(const std::string& body) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : body) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

long parse_long(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        long value = std::stol(text, &used);
        if (used != text.size()) throw ConfigError("");
        return value;
    } catch (...) {
        throw ConfigError("expected an integer for " + what + ", got '" + text + "'");
    }
}

}  // namespace

std::optional<ChainDoc> parse_generator(const std::string& name) {
    std::size_t open = name.find('(');
    if (open == std::string::npos || name.back() != ')') return std::nullopt;
    std::string head = name.substr(0, open);
    if (head != "lazy-torus" && head != "biased-cycle" && head != "gnm") return std::nullopt;
    std::vector<std::string> args = split_args(name.substr(open + 1, name.size() - open - 2));

    if (head == "lazy-torus") {
        if (args.size() != 2) throw ConfigError("lazy-torus takes (n,d)");
        int n = static_cast<int>(parse_long(args[0], "n"));
        int d = static_cast<int>(parse_long(args[1], "d"));
        return ChainDoc{"exact", lazy_torus_kernel<Rat>(n, d)};
    }
    if (head == "biased-cycle") {
        if (args.size() != 2) throw ConfigError("biased-cycle takes (n,p)");
        long n = parse_long(args[0], "n");
        Rat p = parse_rational(args[1]);
        if (n < 3) throw ConfigError("biased-cycle needs n >= 3");
        return ChainDoc{"exact", biased_cycle<Rat>(static_cast<std::size_t>(n), p)};
    }
    if (args.size() != 3) throw ConfigError("gnm takes (n,m,lazy|plain)");
    int n = static_cast<int>(parse_long(args[0], "n"));
    int m = static_cast<int>(parse_long(args[1], "m"));
    bool lazy;
    if (args[2] == "lazy") {
        lazy = true;
    } else if (args[2] == "plain") {
        lazy = false;
    } else {
        throw ConfigError("gnm variant must be 'lazy' or 'plain'");
    }
    try {
        GnmGraph g(n, m);
        return ChainDoc{"exact", g.walk_chain<Rat>(lazy)};
    } catch (const InvalidParams& e) {
        throw ConfigError(std::string("gnm: ") + e.what());
    }
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad JSON in '" + path + "': " + e.what());
    }
    return doc;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

ChainDoc load_chain(const std::string& spec) {
    if (std::optional<ChainDoc> gen = parse_generator(spec)) return *gen;
    return chain_from_json(read_json_file(spec));
}

SetSequence sequence_from_json(const nlohmann::json& doc, std::size_t universe) {
    if (!doc.is_object()) throw ConfigError("sequence document must be a JSON object");
    reject_unknown_keys(doc, {"prefix", "tail"});
    if (!doc.contains("tail")) throw ConfigError("sequence document needs 'tail'");

    auto to_set = [universe](const nlohmann::json& arr) {
        if (!arr.is_array()) throw ConfigError("set must be an array of state indices");
        StateSet s(universe);
        for (const auto& v : arr) {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw ConfigError("state index must be a nonnegative integer");
            std::size_t i = v.get<std::size_t>();
            if (i >= universe) throw ConfigError("state index " + std::to_string(i) + " out of range");
            s.add(i);
        }
        return s;
    };

    std::vector<StateSet> prefix;
    if (doc.contains("prefix"))
        for (const auto& arr : doc["prefix"]) prefix.push_back(to_set(arr));
    StateSet tail = to_set(doc["tail"]);
    try {
        return SetSequence(std::move(prefix), std::move(tail));
    } catch (const InvalidParams& e) {
        throw ConfigError(std::string("invalid sequence: ") + e.what());
    }
}

nlohmann::json sequence_to_json(const SetSequence& seq) {
    nlohmann::json doc;
    nlohmann::json prefix = nlohmann::json::array();
    for (const StateSet& s : seq.prefix) prefix.push_back(s.members());
    doc["prefix"] = std::move(prefix);
    doc["tail"] = seq.tail.members();
    return doc;
}

SetSequence load_sequence(const std::string& path, std::size_t universe) {
    return sequence_from_json(read_json_file(path), universe);
}

}  // namespace mchain
