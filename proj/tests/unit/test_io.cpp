#include <doctest.h>

#include <cstring>

#include "generators.hpp"
#include "kernelpa/error.hpp"
#include "kernelpa/signal_io.hpp"

using namespace kernelpa;

TEST_SUITE("io") {
    TEST_CASE("binary payload is little-endian float64 interleaved I,Q") {
        const ComplexSignal s({Complex(1.0, -2.0), Complex(0.5, 0.25)}, 100.0, 50.0, "tiny");
        const auto path = testgen::scratch("tiny.bin");
        write_iq(path, s);
        const std::string bytes = testgen::slurp(path);
        REQUIRE(bytes.size() == 32);
        const unsigned char one[8] = {0, 0, 0, 0, 0, 0, 0xF0, 0x3F};
        const unsigned char minus_two[8] = {0, 0, 0, 0, 0, 0, 0x00, 0xC0};
        CHECK(std::memcmp(bytes.data(), one, 8) == 0);
        CHECK(std::memcmp(bytes.data() + 8, minus_two, 8) == 0);
    }

    TEST_CASE("sidecar lists the metadata keys") {
        const ComplexSignal s(ComplexVector(5, 1.0), 400e6, 24e6, "exc");
        const auto path = testgen::scratch("meta.bin");
        write_iq(path, s);
        const std::string meta = testgen::slurp(sidecar_path(path));
        CHECK(meta.find("sample_rate_hz=400000000") != std::string::npos);
        CHECK(meta.find("bandwidth_hz=24000000") != std::string::npos);
        CHECK(meta.find("label=exc") != std::string::npos);
        CHECK(meta.find("n_samples=5") != std::string::npos);
    }

    TEST_CASE("binary and CSV round trips are value exact") {
        testgen::Gen g(2);
        const auto s = g.signal(777).with_samples(g.white(777), "rt", 3);
        for (auto fmt : {IqFormat::Binary, IqFormat::Csv}) {
            const auto path = testgen::scratch(fmt == IqFormat::Csv ? "rt.csv" : "rt.bin");
            write_iq(path, s, fmt);
            const auto back = read_iq(path);
            CHECK(back == s);
        }
    }

    TEST_CASE("CSV payload has the i,q header") {
        const ComplexSignal s({Complex(0.5, -1.0)}, 1.0, 1.0);
        const auto path = testgen::scratch("h.csv");
        write_iq(path, s, IqFormat::Csv);
        CHECK(testgen::slurp(path) == "i,q\n0.5,-1\n");
    }

    TEST_CASE("sidecar format key wins over the extension") {
        const ComplexSignal s({Complex(0.5, -1.0), 2.0}, 1.0, 1.0);
        const auto path = testgen::scratch("odd.dat");
        write_iq(path, s, IqFormat::Csv);
        CHECK(read_iq(path) == s);
    }

    TEST_CASE("malformed records") {
        const ComplexSignal s(ComplexVector(4, 1.0), 1.0, 1.0);
        const auto path = testgen::scratch("bad.bin");
        write_iq(path, s);
        testgen::spit(path, std::string(40, '\0'));
        CHECK_THROWS_AS((void)read_iq(path), FormatError);

        write_iq(path, s);
        testgen::spit(sidecar_path(path), "sample_rate_hz=1\nn_samples=4\n");
        CHECK_THROWS_AS((void)read_iq(path), FormatError);

        write_iq(path, s);
        testgen::spit(sidecar_path(path), "sample_rate_hz=1\nbandwidth_hz=1\nn_samples=4\nformat=wav\n");
        CHECK_THROWS_AS((void)read_iq(path), FormatError);

        write_iq(path, s);
        testgen::spit(sidecar_path(path), "sample_rate_hz=1\nbandwidth_hz=2\nn_samples=4\n");
        CHECK_THROWS_AS((void)read_iq(path), FormatError);

        const auto csv = testgen::scratch("bad.csv");
        write_iq(csv, s, IqFormat::Csv);
        testgen::spit(csv, "x,y\n1,0\n1,0\n1,0\n1,0\n");
        CHECK_THROWS_AS((void)read_iq(csv), FormatError);
        testgen::spit(csv, "i,q\n1,0\n1,0\n");
        CHECK_THROWS_AS((void)read_iq(csv), FormatError);

        CHECK_THROWS_AS((void)read_iq(testgen::scratch("missing.bin")), IoError);
    }

    TEST_CASE("format_for_path") {
        CHECK(format_for_path("a.csv") == IqFormat::Csv);
        CHECK(format_for_path("a.bin") == IqFormat::Binary);
        CHECK(format_for_path("csv") == IqFormat::Binary);
    }
}
