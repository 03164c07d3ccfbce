/* Structured pass/fail reports.  Checkers never throw on a mathematical
 * failure; they return a report whose steps carry the witness.  Certificate
 * steps are labeled "computed" when this run established the fact and
 * "paper-implied" when the fact is quoted from the underlying theory. */

#ifndef WSH_REPORT_HPP
#define WSH_REPORT_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace wsh {

using json = nlohmann::ordered_json;

struct Step {
    std::string name;
    std::string status;           // "pass" | "fail" | "skip"
    std::string kind = "computed";  // "computed" | "paper-implied"
    json witness = nullptr;
    std::string note;

    json to_json() const {
        json j{{"name", name}, {"status", status}, {"kind", kind}};
        if (!witness.is_null()) j["witness"] = witness;
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

struct Report {
    std::string outcome = "PASS";  // PASS | FAIL | OUT_OF_SCOPE
    std::vector<Step> steps;
    json extra = json::object();

    bool ok() const { return outcome == "PASS"; }
    void add(Step s) {
        if (s.status == "fail" && outcome == "PASS") outcome = "FAIL";
        steps.push_back(std::move(s));
    }
    void add_pass(const std::string& name, const std::string& kind = "computed") {
        add(Step{name, "pass", kind, nullptr, ""});
    }
    void add_fail(const std::string& name, json witness, const std::string& note = "") {
        add(Step{name, "fail", "computed", std::move(witness), note});
    }

    json to_json() const {
        json js = json::array();
        for (auto& s : steps) js.push_back(s.to_json());
        json j{{"outcome", outcome}, {"steps", js}};
        if (!extra.empty()) j["extra"] = extra;
        return j;
    }
};

}  // namespace wsh

#endif
