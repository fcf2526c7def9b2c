#include "crlink/amc.hpp"

namespace crlink {

namespace {

// Frozen copy of data/amc_modes_default.txt. Constants were produced by
// fit_mode_constants run over coded-QAM reference curves sampled between
// BER 1e-2 and 1e-6 (see tests for the regeneration recipe).
constexpr std::string_view kDefaultTableDocument =
    "# Default transmission mode table: 802.11a-style rate ladder with\n"
    "# exponential BER-curve constants fitted to coded-QAM reference curves.\n"
    "# index rate coeff decay\n"
    "0 0 - -\n"
    "1 0.5 0.0961728528649 3.76260352999\n"
    "2 0.75 0.128110386163 2.3576357035\n"
    "3 1 0.151720236783 1.8721669817\n"
    "4 1.5 0.17510063477 1.17515858871\n"
    "5 2 0.221316226929 0.373114430065\n"
    "6 3 0.25938610025 0.234208357434\n"
    "7 4 0.304646876082 0.0708783012391\n";

}  // namespace

std::string_view AmcTable::default_table_document() { return kDefaultTableDocument; }

const AmcTable& AmcTable::default_table() {
    static const AmcTable table = AmcTable::parse(kDefaultTableDocument);
    return table;
}

}  // namespace crlink
