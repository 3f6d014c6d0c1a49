#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace reso {

/// printf("%.17g") for a binary64 value; round-trips exactly.
std::string format_g17(double v);

/// Minimal CSV table: header row plus rows of pre-formatted cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
    std::string str() const;
};

}  // namespace reso
