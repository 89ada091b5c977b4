#pragma once

#include <string>
#include <vector>

namespace ossa {

struct TrainLogRow {
    int epoch = 0;
    double lr = 0.0;
    double loss = 0.0;
    double acc = 0.0;
};

/// Writes `epoch,lr,loss,acc` CSV rows with a header line.
void write_train_log(const std::string& path, const std::vector<TrainLogRow>& rows);

}  // namespace ossa
