// Writes the embedded quantile tables as JSON files (psi.json, l_m1.json,
// l_m2.json) into the directory given as the only argument.
#include <fstream>
#include <iostream>
#include <string>

#include "monotrend/limits.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: export_tables <output-dir>\n";
        return 2;
    }
    const std::string dir = argv[1];
    const auto write = [&dir](const std::string& name,
                              const monotrend::QuantileTable& table) {
        const std::string path = dir + "/" + name;
        std::ofstream out(path);
        if (!out) {
            std::cerr << path << ": cannot open for writing\n";
            std::exit(3);
        }
        out << monotrend::table_to_json(table);
    };
    write("psi.json", monotrend::embedded_psi_table());
    write("l_m1.json", monotrend::embedded_l_table_m1());
    write("l_m2.json", monotrend::embedded_l_table_m2());
    return 0;
}
