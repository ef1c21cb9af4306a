#ifndef FLUXGRAPH_CSV_HPP
#define FLUXGRAPH_CSV_HPP

#include <string>
#include <vector>

namespace fluxgraph {
namespace csv {

// Floats are printed with 17 significant digits so that a written double
// parses back to the identical bit pattern.
std::string format_double(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
    std::string serialize() const;
};

// Emits `table` at `path` (overwrite).  Returns the serialized bytes.
std::string write_file(const std::string& path, const Table& table);

// Strict reader for files produced by write_file: header line plus rows,
// comma separated, no quoting (our cells never contain commas).
Table read_file(const std::string& path);

}  // namespace csv
}  // namespace fluxgraph

#endif
