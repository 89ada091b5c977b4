#include "ossa/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "ossa/errors.hpp"

namespace ossa {

namespace {

constexpr char kMagic[] = "OSSA-CKPT";
constexpr std::size_t kMagicLen = 9;
constexpr std::uint8_t kVersion = 1;

void put_u8(std::string& buf, std::uint8_t v) { buf.push_back(static_cast<char>(v)); }

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(buf, bits);
}

void put_f64s(std::string& buf, std::span<const double> values) {
    for (double v : values) put_f64(buf, v);
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    void read_exact(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw CheckpointError("truncated checkpoint stream");
        }
    }

    std::uint8_t u8() {
        char c;
        read_exact(&c, 1);
        return static_cast<std::uint8_t>(c);
    }

    std::uint32_t u32() {
        unsigned char b[4];
        read_exact(reinterpret_cast<char*>(b), 4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) |
               (static_cast<std::uint32_t>(b[3]) << 24);
    }

    std::uint64_t u64() {
        std::uint64_t v = 0;
        unsigned char b[8];
        read_exact(reinterpret_cast<char*>(b), 8);
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }

    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    void f64s(std::span<double> out) {
        for (double& v : out) v = f64();
    }

    bool at_eof() {
        return in_.peek() == std::char_traits<char>::eof();
    }

private:
    std::istream& in_;
};

std::string encode_head(const ClassifierHead& head) {
    std::string p;
    put_u32(p, static_cast<std::uint32_t>(head.weight.rows()));
    put_u32(p, static_cast<std::uint32_t>(head.weight.cols()));
    put_f64s(p, head.weight.flat());
    put_f64s(p, head.bias);
    return p;
}

std::string encode_optimizer(const OptimizerSnapshot& opt) {
    std::string p;
    put_f64(p, opt.config.beta1);
    put_f64(p, opt.config.beta2);
    put_f64(p, opt.config.eps);
    put_f64(p, opt.config.weight_decay);
    put_u64(p, opt.step);
    put_u64(p, opt.moment1.size());
    put_f64s(p, opt.moment1);
    put_f64s(p, opt.moment2);
    return p;
}

std::string encode_proxies(const ProxySet& proxies) {
    std::string p;
    put_u32(p, static_cast<std::uint32_t>(proxies.size()));
    put_u32(p, static_cast<std::uint32_t>(proxies.dim()));
    for (std::size_t i = 0; i < proxies.size(); ++i) {
        put_u32(p, static_cast<std::uint32_t>(proxies.ids()[i].value()));
        put_f64s(p, proxies.proxy(i).view());
    }
    return p;
}

}  // namespace

void save_checkpoint(std::ostream& out, const CheckpointContents& contents) {
    contents.model.validate();

    std::string buf;
    buf.append(kMagic, kMagicLen);
    put_u8(buf, kVersion);
    put_u32(buf, static_cast<std::uint32_t>(contents.model.layers.size()));
    for (const Layer& layer : contents.model.layers) {
        put_u32(buf, static_cast<std::uint32_t>(layer.out_dim()));
        put_u32(buf, static_cast<std::uint32_t>(layer.in_dim()));
        put_u8(buf, static_cast<std::uint8_t>(layer.activation));
        put_f64s(buf, layer.weight.flat());
        put_f64s(buf, layer.bias);
    }

    const auto put_block = [&buf](char tag, const std::string& payload) {
        put_u8(buf, static_cast<std::uint8_t>(tag));
        put_u64(buf, payload.size());
        buf += payload;
    };
    if (contents.head) put_block('H', encode_head(*contents.head));
    if (contents.optimizer) put_block('O', encode_optimizer(*contents.optimizer));
    if (contents.proxies) put_block('P', encode_proxies(*contents.proxies));

    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("checkpoint write failed");
}

void save_checkpoint(const std::string& path, const CheckpointContents& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    save_checkpoint(out, contents);
}

namespace {

ClassifierHead decode_head(Reader& r) {
    ClassifierHead head;
    const std::uint32_t out = r.u32();
    const std::uint32_t in = r.u32();
    head.weight = Matrix(out, in);
    head.bias.assign(out, 0.0);
    r.f64s(head.weight.flat());
    r.f64s(head.bias);
    return head;
}

OptimizerSnapshot decode_optimizer(Reader& r) {
    OptimizerSnapshot opt;
    opt.config.beta1 = r.f64();
    opt.config.beta2 = r.f64();
    opt.config.eps = r.f64();
    opt.config.weight_decay = r.f64();
    opt.step = r.u64();
    const std::uint64_t count = r.u64();
    opt.moment1.resize(count);
    opt.moment2.resize(count);
    r.f64s(opt.moment1);
    r.f64s(opt.moment2);
    return opt;
}

ProxySet decode_proxies(Reader& r) {
    const std::uint32_t count = r.u32();
    const std::uint32_t dim = r.u32();
    std::vector<ClassId> ids;
    std::vector<Embedding> proxies;
    for (std::uint32_t i = 0; i < count; ++i) {
        ids.push_back(ClassId(static_cast<std::int32_t>(r.u32())));
        Embedding e;
        e.values.resize(dim);
        r.f64s(e.values);
        proxies.push_back(std::move(e));
    }
    return ProxySet(std::move(ids), std::move(proxies));
}

}  // namespace

CheckpointContents load_checkpoint(std::istream& in) {
    Reader r(in);

    char magic[kMagicLen];
    r.read_exact(magic, kMagicLen);
    if (std::memcmp(magic, kMagic, kMagicLen) != 0) {
        throw CheckpointError("bad checkpoint magic");
    }
    const std::uint8_t version = r.u8();
    if (version != kVersion) {
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    }

    CheckpointContents contents;
    const std::uint32_t layer_count = r.u32();
    for (std::uint32_t l = 0; l < layer_count; ++l) {
        Layer layer;
        const std::uint32_t out = r.u32();
        const std::uint32_t in_dim = r.u32();
        const std::uint8_t act = r.u8();
        if (act > 1) throw CheckpointError("unknown activation code");
        layer.weight = Matrix(out, in_dim);
        layer.bias.assign(out, 0.0);
        layer.activation = static_cast<Activation>(act);
        r.f64s(layer.weight.flat());
        r.f64s(layer.bias);
        contents.model.layers.push_back(std::move(layer));
    }
    contents.model.validate();

    while (!r.at_eof()) {
        const char tag = static_cast<char>(r.u8());
        const std::uint64_t size = r.u64();
        std::string payload(size, '\0');
        r.read_exact(payload.data(), size);
        std::istringstream ps(payload);
        Reader pr(ps);
        switch (tag) {
            case 'H': contents.head = decode_head(pr); break;
            case 'O': contents.optimizer = decode_optimizer(pr); break;
            case 'P': contents.proxies = decode_proxies(pr); break;
            default:
                throw CheckpointError(std::string("unknown checkpoint block tag '") + tag + "'");
        }
    }
    return contents;
}

CheckpointContents load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return load_checkpoint(in);
}

}  // namespace ossa
