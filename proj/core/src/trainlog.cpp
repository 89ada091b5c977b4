#include "ossa/trainlog.hpp"

#include <cstdio>
#include <fstream>

#include "ossa/errors.hpp"

namespace ossa {

void write_train_log(const std::string& path, const std::vector<TrainLogRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "epoch,lr,loss,acc\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.epoch, r.lr, r.loss, r.acc);
        out << buf;
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace ossa
