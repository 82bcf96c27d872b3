// Development helper used by generate_data.py: computes the lag 0..4
// transformed year-over-year feature columns for each indicator extract and
// writes them as one aligned CSV. Not part of the shipped build.
//
// Usage: dump_features OUT.csv (ID PATH RESAMPLE)...

#include "lossforecast/config.hpp"
#include "lossforecast/csv.hpp"
#include "lossforecast/features.hpp"
#include "lossforecast/series.hpp"
#include "lossforecast/transforms.hpp"

#include <cstdio>
#include <string>
#include <vector>

using namespace lossforecast;

int main(int argc, char** argv) {
    if (argc < 5 || (argc - 2) % 3 != 0) {
        std::fprintf(stderr, "usage: dump_features OUT.csv (ID PATH RESAMPLE)...\n");
        return 1;
    }
    std::string out_path = argv[1];

    std::vector<std::string> names;
    std::vector<QuarterlySeries> columns;
    for (int i = 2; i + 2 < argc; i += 3) {
        std::string id = argv[i];
        ResampleMethod method = resample_method_from_name(argv[i + 2]);
        QuarterlySeries series = resample_to_quarterly(id, ingest_csv(argv[i + 1], id), method);
        for (int k = 0; k <= 4; ++k) {
            QuarterlySeries lagged = lag(series, k);
            TransformSpec spec = select_best_transform(lagged.values());
            QuarterlySeries transformed(lagged.id(), lagged.start(),
                                        lossforecast::apply(spec, lagged.values()));
            columns.push_back(yoy_change(transformed));
            names.push_back(id + "_lag" + std::to_string(k));
            std::fprintf(stderr, "%s: transform=%s\n", names.back().c_str(),
                         transform_kind_name(spec.kind));
        }
    }

    std::vector<QuarterlySeries> aligned = align(columns);
    std::vector<std::string> header{"quarter"};
    for (const std::string& n : names)
        header.push_back(n);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t r = 0; r < aligned.front().size(); ++r) {
        std::vector<std::string> row{aligned.front().start().plus(static_cast<int>(r)).str()};
        for (const QuarterlySeries& c : aligned)
            row.push_back(format_double(c[r]));
        rows.push_back(std::move(row));
    }
    write_csv(out_path, header, rows);
    std::printf("wrote %zu rows x %zu columns to %s\n", rows.size(), names.size(),
                out_path.c_str());
    return 0;
}
