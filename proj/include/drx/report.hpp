// Tabular output: one table abstraction emitted as CSV (with # metadata
// comments) or JSON. All values are preformatted strings so exact
// rationals survive untouched.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace drx {

struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }
    void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }
};

void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t);

// Shortest round-trippable decimal form.
std::string fmt_double(double x);

} // namespace drx
