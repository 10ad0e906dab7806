#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hodgelab/error.hpp"
#include "hodgelab/exactlin/abgroup.hpp"
#include "json.hpp"

namespace hodgelab {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";

inline json to_json(const AbGroup& g) {
    json t = json::array();
    for (auto& x : g.torsion) {
        if (x.fits_slong_p())
            t.push_back(x.get_si());
        else
            t.push_back(x.get_str());
    }
    return json{{"rank", g.rank}, {"torsion", t}};
}

inline AbGroup abgroup_from_json(const json& j) {
    std::vector<mpz_class> t;
    for (auto& x : j.at("torsion")) t.push_back(x.is_string() ? mpz_class(x.get<std::string>()) : mpz_class(x.get<long>()));
    return AbGroup(j.at("rank").get<std::size_t>(), std::move(t));
}

enum class Verdict { Pass, Fail, Skip, Info };

inline std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Skip: return "skip";
        case Verdict::Info: return "info";
    }
    return "?";
}

inline Verdict parse_verdict(const std::string& s) {
    if (s == "pass") return Verdict::Pass;
    if (s == "fail") return Verdict::Fail;
    if (s == "skip") return Verdict::Skip;
    if (s == "info") return Verdict::Info;
    throw ConfigError("unknown verdict '" + s + "'");
}

inline Verdict verdict_of(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

struct ReportEntry {
    std::string module;
    int n = 0;
    long w = 0;
    std::string id;
    json inputs = json::object();
    json result;           // AbGroup object, dimension, or small record
    Verdict verdict = Verdict::Info;
    std::string claim;     // what the verdict asserts

    json to_json() const {
        return json{{"module", module}, {"n", n},         {"w", w},
                    {"id", id},         {"inputs", inputs}, {"result", result},
                    {"verdict", verdict_str(verdict)}, {"claim", claim}};
    }
    static ReportEntry from_json(const json& j) {
        ReportEntry e;
        e.module = j.at("module").get<std::string>();
        e.n = j.at("n").get<int>();
        e.w = j.at("w").get<long>();
        e.id = j.at("id").get<std::string>();
        e.inputs = j.at("inputs");
        e.result = j.at("result");
        e.verdict = parse_verdict(j.at("verdict").get<std::string>());
        e.claim = j.at("claim").get<std::string>();
        return e;
    }
    bool operator==(const ReportEntry& o) const {
        return std::tie(module, n, w, id, inputs, result, verdict, claim) ==
               std::tie(o.module, o.n, o.w, o.id, o.inputs, o.result, o.verdict, o.claim);
    }
};

struct Summary {
    std::size_t pass = 0, fail = 0, skipped = 0;
    bool operator==(const Summary&) const = default;
};

struct Report {
    std::string command;
    json params = json::object();
    std::vector<ReportEntry> entries;
    std::string version = kVersion;
    std::map<std::string, long> elapsed_ms;  // emitted only on request

    ReportEntry& add(ReportEntry e) {
        entries.push_back(std::move(e));
        return entries.back();
    }

    Summary summary() const {
        Summary s;
        for (auto& e : entries) {
            if (e.verdict == Verdict::Pass) ++s.pass;
            if (e.verdict == Verdict::Fail) ++s.fail;
            if (e.verdict == Verdict::Skip) ++s.skipped;
        }
        return s;
    }
    bool passed() const { return summary().fail == 0; }

    // Total order by (module, n, w); insertion order breaks ties.
    void sort() {
        std::stable_sort(entries.begin(), entries.end(), [](const ReportEntry& a, const ReportEntry& b) {
            return std::tie(a.module, a.n, a.w) < std::tie(b.module, b.n, b.w);
        });
    }

    json to_json(bool timing = false) const {
        json j;
        j["command"] = command;
        j["params"] = params;
        json arr = json::array();
        for (auto& e : entries) arr.push_back(e.to_json());
        j["entries"] = arr;
        auto s = summary();
        j["summary"] = json{{"pass", s.pass}, {"fail", s.fail}, {"skipped", s.skipped}};
        j["version"] = version;
        if (timing) {
            json t = json::object();
            for (auto& [k, v] : elapsed_ms) t[k] = v;
            j["elapsed_ms"] = t;
        }
        return j;
    }

    static Report from_json(const json& j) {
        Report r;
        r.command = j.at("command").get<std::string>();
        r.params = j.at("params");
        for (auto& e : j.at("entries")) r.entries.push_back(ReportEntry::from_json(e));
        r.version = j.at("version").get<std::string>();
        if (j.contains("elapsed_ms"))
            for (auto& [k, v] : j["elapsed_ms"].items()) r.elapsed_ms[k] = v.get<long>();
        auto s = r.summary();
        const auto& js = j.at("summary");
        if (js.at("pass").get<std::size_t>() != s.pass || js.at("fail").get<std::size_t>() != s.fail ||
            js.at("skipped").get<std::size_t>() != s.skipped)
            throw ConfigError("summary does not match entries");
        return r;
    }

    bool operator==(const Report& o) const {
        return command == o.command && params == o.params && entries == o.entries && version == o.version;
    }

    std::string text(bool timing = false) const {
        std::ostringstream os;
        os << "# " << command;
        for (auto& [k, v] : params.items()) os << " " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
        os << "\n";
        for (auto& e : entries) {
            os << std::left;
            os.width(5);
            os << verdict_str(e.verdict) << " " << e.module << " n=" << e.n << " w=" << e.w << " " << e.id << " ";
            os << (e.result.is_string() ? e.result.get<std::string>() : e.result.dump());
            if (!e.claim.empty()) os << "  [" << e.claim << "]";
            os << "\n";
        }
        auto s = summary();
        os << "summary: pass=" << s.pass << " fail=" << s.fail << " skipped=" << s.skipped << "\n";
        if (timing)
            for (auto& [k, v] : elapsed_ms) os << "elapsed " << k << " " << v << " ms\n";
        return os.str();
    }
};

}  // namespace hodgelab
