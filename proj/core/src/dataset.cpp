#include "ossa/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ossa/errors.hpp"
#include "ossa/rng.hpp"

namespace ossa {

LabeledDataset stratified_undersample(const LabeledDataset& data, std::uint64_t seed) {
    // Gather train-sample indices per seen class, ascending.
    std::map<ClassId, std::vector<std::size_t>> train_by_class;
    std::vector<ClassId> seen = data.seen_classes();
    for (ClassId c : seen) train_by_class[c] = {};
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        const auto& s = data.samples[i];
        if (s.seen && s.split == Split::train) train_by_class[s.label].push_back(i);
    }

    std::size_t min_count = 0;
    bool first = true;
    for (const auto& [cls, idx] : train_by_class) {
        if (idx.empty()) {
            throw EmptyClassError("seen class " + std::to_string(cls.value()) +
                                  " has no train samples");
        }
        min_count = first ? idx.size() : std::min(min_count, idx.size());
        first = false;
    }

    std::vector<bool> keep(data.samples.size(), true);
    Rng rng(seed);
    for (auto& [cls, idx] : train_by_class) {
        Rng class_rng = rng.fork(static_cast<std::uint64_t>(cls.value()));
        // Partial Fisher-Yates: the first min_count entries are the draw.
        for (std::size_t i = 0; i + 1 < idx.size() && i < min_count; ++i) {
            const std::size_t j = i + class_rng.below(idx.size() - i);
            std::swap(idx[i], idx[j]);
        }
        for (std::size_t i = min_count; i < idx.size(); ++i) keep[idx[i]] = false;
    }

    LabeledDataset out;
    out.class_names = data.class_names;
    out.samples.reserve(data.samples.size());
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        if (keep[i]) out.samples.push_back(data.samples[i]);
    }
    return out;
}

namespace {

void append_double(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    line += buf;
}

}  // namespace

void write_feature_file(std::ostream& out, const LabeledDataset& data) {
    out << "OSSA-FEAT v1 dim=" << data.feature_dim() << " classes=" << data.class_count()
        << "\n";
    std::string line;
    for (const auto& s : data.samples) {
        line.clear();
        line += std::to_string(s.label.value());
        line += ' ';
        line += split_name(s.split);
        line += ' ';
        line += s.seen ? '1' : '0';
        for (double v : s.features.values) {
            line += ' ';
            append_double(line, v);
        }
        line += '\n';
        out << line;
    }
}

void write_feature_file(const std::string& path, const LabeledDataset& data) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_feature_file(out, data);
    if (!out) throw IoError("write failed for '" + path + "'");
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw ParseError("feature file line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

LabeledDataset read_feature_file(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("feature file line 1: empty file");

    std::size_t dim = 0, classes = 0;
    {
        std::istringstream hs(header);
        std::string magic, version, dim_kv, classes_kv;
        hs >> magic >> version >> dim_kv >> classes_kv;
        if (magic != "OSSA-FEAT") parse_fail(1, "bad magic '" + magic + "'");
        if (version != "v1") parse_fail(1, "unsupported version '" + version + "'");
        if (dim_kv.rfind("dim=", 0) != 0 || classes_kv.rfind("classes=", 0) != 0) {
            parse_fail(1, "expected 'dim=<D> classes=<N>'");
        }
        dim = std::strtoul(dim_kv.c_str() + 4, nullptr, 10);
        classes = std::strtoul(classes_kv.c_str() + 8, nullptr, 10);
        if (dim == 0) parse_fail(1, "dim must be positive");
    }

    LabeledDataset data;
    data.class_names.reserve(classes);
    for (std::size_t i = 0; i < classes; ++i) data.class_names.push_back("class" + std::to_string(i));

    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;

        const char* p = line.c_str();
        char* end = nullptr;
        const long label = std::strtol(p, &end, 10);
        if (end == p) parse_fail(line_no, "expected class id");
        if (label < 0 || static_cast<std::size_t>(label) >= classes) {
            parse_fail(line_no, "class id " + std::to_string(label) + " out of range [0," +
                                    std::to_string(classes) + ")");
        }
        p = end;

        std::istringstream rest(p);
        std::string split_tag, seen_tag;
        if (!(rest >> split_tag >> seen_tag)) parse_fail(line_no, "expected split and seen tags");
        Split split;
        try {
            split = split_from_name(split_tag);
        } catch (const ParseError&) {
            parse_fail(line_no, "bad split tag '" + split_tag + "'");
        }
        if (seen_tag != "0" && seen_tag != "1") {
            parse_fail(line_no, "seen flag must be 0 or 1, got '" + seen_tag + "'");
        }

        LabeledSample sample;
        sample.label = ClassId(static_cast<std::int32_t>(label));
        sample.split = split;
        sample.seen = seen_tag == "1";
        sample.features.values.reserve(dim);
        double v;
        while (rest >> v) sample.features.values.push_back(v);
        if (!rest.eof()) parse_fail(line_no, "malformed float");
        if (sample.features.dim() != dim) {
            parse_fail(line_no, "expected " + std::to_string(dim) + " values, got " +
                                    std::to_string(sample.features.dim()));
        }
        data.samples.push_back(std::move(sample));
    }
    data.validate();
    return data;
}

LabeledDataset read_feature_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_feature_file(in);
}

}  // namespace ossa
