#ifndef CASIMIR_IDEAL_TABLES_HPP
#define CASIMIR_IDEAL_TABLES_HPP

// Published Casimir experiments: geometry plus the ideal-conductor force quoted for each.
// Forces are recomputed from geometry by `recompute_table`.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "casimir/lifshitz.hpp"

namespace casimir {

struct ExperimentRow {
    std::string label;
    int year;
    IdealGeometry geometry;
    double quoted_force;  // N
    bool reference_only;  // excluded from the summary statistics
};

inline std::vector<ExperimentRow> plate_plate_experiments() {
    return {
        {"Bressi 2002", 2002, PlatePlate{1.44e-6, 500e-9}, 2.99718e-8, false},
        {"Norte 2018", 2018, PlatePlate{1.152e-10, 100e-9}, 1.49859e-9, false},
        {"Fong 2019", 2019, PlatePlate{1.089e-7, 250e-9}, 3.62659e-8, false},
        {"Perez-Morelo 2020", 2020, PlatePlate{8.0e-12, 70e-9}, 4.3344e-10, false},
        {"Pate 2020 (drum R = 185 um)", 2020, PlatePlate{1.07518e-7, 585e-9}, 1.19423e-9, false},
        {"NbTiN membrane 709 um", 2025, PlatePlate{4.9e-7, 190e-9}, 4.89117e-7, true},
    };
}

inline std::vector<ExperimentRow> sphere_plate_experiments() {
    auto row = [](const char* label, int year, double R_um, double d_nm, double F) {
        return ExperimentRow{label, year, SpherePlate{R_um * 1e-6, d_nm * 1e-9}, F, false};
    };
    return {
        row("Lamoreaux 1997", 1997, 113000, 600, 1.42528e-9),
        row("Mohideen 1998", 1998, 98, 100, 2.66995e-10),
        row("Chan 2001", 2001, 100, 75.7, 6.28042e-10),
        row("Decca 2003", 2003, 296, 200, 1.00804e-10),
        row("Decca 2007", 2007, 151.3, 160, 1.00636e-10),
        row("van Zwol 2008a", 2008, 50, 12, 7.8832e-8),
        row("Munday 2008", 2008, 19.9, 30, 2.00801e-9),
        row("van Zwol 2008b", 2008, 50, 20, 1.70277e-8),
        row("Jourdan 2009", 2009, 20, 100, 5.44887e-11),
        row("de Man 2009", 2009, 100, 50, 2.17955e-9),
        row("Masuda 2009", 2009, 207000, 500, 4.51167e-9),
        row("Munday 2009", 2009, 19.9, 18, 9.29634e-9),
        row("Torricelli 2011", 2011, 10, 60, 1.26131e-10),
        row("Sushkov 2011", 2011, 156000, 700, 1.2391e-9),
        row("Chang 2012", 2012, 41.3, 50, 9.00153e-10),
        row("Garcia-Sanchez 2012", 2012, 4000, 100, 1.08977e-8),
        row("Banishev 2013", 2013, 61.7, 222, 1.53639e-11),
        row("Bimonte 2016", 2016, 149.3, 200, 5.08448e-11),
        row("Eerkens 2017", 2017, 100, 55, 1.63753e-9),
        row("Xu 2018", 2018, 60.8, 245, 1.12637e-11),
        row("Liu 2019a", 2019, 43.446, 250, 7.57541e-12),
        row("Stange 2019", 2019, 55, 60, 6.93722e-10),
        row("Liu 2019b", 2019, 43, 250, 7.49765e-12),
        row("Liu 2021a", 2021, 60.35, 250, 1.05229e-11),
        row("Liu 2021b", 2021, 60.35, 250, 1.05229e-11),
        row("Bimonte 2021", 2021, 149.7, 200, 5.0981e-11),
        row("Xu 2022a", 2022, 69.1, 175, 3.51269e-11),
        row("Xu 2022b", 2022, 35, 50, 7.62842e-10),
        row("Xu 2024", 2024, 35, 100, 9.53552e-11),
    };
}

// Quoted summary statistics over the non-reference rows.
inline constexpr double kPlatePlateQuotedAverage = 1.3873e-8;
inline constexpr double kPlatePlateQuotedMedian = 1.4986e-9;
inline constexpr double kSpherePlateQuotedAverage = 4.5856e-9;
inline constexpr double kSpherePlateQuotedMedian = 2.6700e-10;

struct RecomputedRow {
    ExperimentRow row;
    double force;      // N, from geometry
    double deviation;  // force / quoted - 1
};

struct RecomputedTable {
    std::vector<RecomputedRow> rows;
    double average;  // over non-reference rows
    double median;
};

inline RecomputedTable recompute_table(const std::vector<ExperimentRow>& rows) {
    RecomputedTable t;
    std::vector<double> pool;
    for (const auto& r : rows) {
        const double f = ideal_casimir_force(r.geometry);
        t.rows.push_back({r, f, f / r.quoted_force - 1.0});
        if (!r.reference_only) {
            pool.push_back(f);
        }
    }
    double sum = 0.0;
    for (double f : pool) {
        sum += f;
    }
    t.average = pool.empty() ? 0.0 : sum / static_cast<double>(pool.size());
    std::sort(pool.begin(), pool.end());
    const std::size_t n = pool.size();
    t.median = n == 0 ? 0.0 : (n % 2 ? pool[n / 2] : 0.5 * (pool[n / 2 - 1] + pool[n / 2]));
    return t;
}

}  // namespace casimir

#endif  // CASIMIR_IDEAL_TABLES_HPP
