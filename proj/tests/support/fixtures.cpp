#include "support/fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace testsupport {

namespace {

DeviceSetSpec mcu_deviceset() {
    DeviceSetSpec ds;
    ds.name = "ATMEGA128";
    ds.prefix = "U";
    ds.device_name = "";
    ds.package_name = "QFN64";
    ds.pins = {{"PB5", "io", "1"}, {"RST", "in", "2"}, {"VCC", "pwr", "3"}, {"GND", "pwr", "4"}};
    return ds;
}

DeviceSetSpec resistor_deviceset() {
    DeviceSetSpec ds;
    ds.name = "RESISTOR";
    ds.prefix = "R";
    ds.uservalue = true;
    ds.device_name = "-0805";
    ds.package_name = "R0805";
    ds.pins = {{"1", "pas", "1"}, {"2", "pas", "2"}};
    return ds;
}

DeviceSetSpec led_deviceset() {
    DeviceSetSpec ds;
    ds.name = "LED";
    ds.prefix = "D";
    ds.device_name = "-0805";
    ds.package_name = "LED0805";
    ds.pins = {{"A", "pas", "A"}, {"C", "pas", "C"}};
    return ds;
}

DeviceSetSpec capacitor_deviceset() {
    DeviceSetSpec ds;
    ds.name = "CAPACITOR";
    ds.prefix = "C";
    ds.uservalue = true;
    ds.device_name = "-0805";
    ds.package_name = "C0805";
    ds.pins = {{"1", "pas", "1"}, {"2", "pas", "2"}};
    return ds;
}

NetSpec* find_net(SchSpec& spec, const std::string& name) {
    for (auto& sheet : spec.sheets)
        for (auto& net : sheet.nets)
            if (net.name == name)
                return &net;
    return nullptr;
}

void drop_pinref(SchSpec& spec, const std::string& net, const std::string& part,
                 const std::string& pin) {
    NetSpec* n = find_net(spec, net);
    if (!n)
        throw std::logic_error("fixture has no net " + net);
    for (auto it = n->pins.begin(); it != n->pins.end(); ++it) {
        if (it->part == part && it->pin == pin) {
            n->pins.erase(it);
            return;
        }
    }
    throw std::logic_error("fixture net " + net + " has no pin " + part + "." + pin);
}

void drop_part(SchSpec& spec, const std::string& name) {
    std::erase_if(spec.parts, [&](const PartSpec& p) { return p.name == name; });
    for (auto& sheet : spec.sheets)
        std::erase_if(sheet.instances, [&](const InstanceSpec& i) { return i.part == name; });
}

void drop_net(SchSpec& spec, const std::string& name) {
    for (auto& sheet : spec.sheets)
        std::erase_if(sheet.nets, [&](const NetSpec& n) { return n.name == name; });
}

} // namespace

SchSpec blinky_sch() {
    SchSpec spec;
    spec.devicesets = {mcu_deviceset(), resistor_deviceset(), led_deviceset(),
                       capacitor_deviceset()};
    spec.parts = {
        {"U1", "ATMEGA128", std::nullopt, {}},
        {"R1", "RESISTOR", "330", {}},
        {"R2", "RESISTOR", "10k", {}},
        {"D1", "LED", std::nullopt, {}},
        {"C1", "CAPACITOR", "100n", {}},
    };
    SheetSpec sheet;
    sheet.instances = {
        {"U1", 0.0, 0.0, ""},
        {"R1", 10.16, 5.08, "R90"},
        {"R2", 10.16, 15.24, "R90"},
        {"D1", 20.32, 5.08, ""},
        {"C1", 20.32, 15.24, ""},
    };
    sheet.nets = {
        {"N$1", {{"U1", "PB5"}, {"R1", "1"}}, 1},
        {"N$2", {{"R1", "2"}, {"D1", "A"}}, 1},
        {"GND", {{"U1", "GND"}, {"D1", "C"}, {"C1", "2"}}, 1},
        {"VCC", {{"U1", "VCC"}, {"R2", "2"}, {"C1", "1"}}, 1},
        {"RST", {{"U1", "RST"}, {"R2", "1"}}, 1},
    };
    spec.sheets = {sheet};
    return spec;
}

BrdSpec blinky_brd() {
    BrdSpec spec;
    spec.devicesets = {mcu_deviceset(), resistor_deviceset(), led_deviceset(),
                       capacitor_deviceset()};
    spec.elements = {
        {"U1", "QFN64", std::nullopt, 40.0, 40.0, ""},
        {"R1", "R0805", "330", 10.0, 10.0, "R90"},
        {"R2", "R0805", "10k", 10.0, 20.0, ""},
        {"D1", "LED0805", std::nullopt, 70.0, 70.0, ""},
        {"C1", "C0805", "100n", 50.0, 40.0, ""},
    };
    spec.signals = {
        {"N$1", {{"U1", "1"}, {"R1", "1"}}, {{1, 40.0, 40.0, 10.0, 10.0, 0.254}}, {}},
        {"N$2",
         {{"R1", "2"}, {"D1", "A"}},
         {{16, 10.0, 10.0, 70.0, 70.0, 0.254}},
         {{30.0, 30.0, "1-16", 0.3}}},
        {"GND", {{"U1", "4"}, {"D1", "C"}, {"C1", "2"}}, {{16, 40.0, 40.0, 50.0, 40.0, 0.4}}, {}},
        {"VCC", {{"U1", "3"}, {"R2", "2"}, {"C1", "1"}}, {{1, 40.0, 40.0, 50.0, 40.0, 0.4}}, {}},
        {"RST", {{"U1", "2"}, {"R2", "1"}}, {{1, 40.0, 40.0, 10.0, 20.0, 0.254}}, {}},
    };
    spec.outline = {
        {0.0, 0.0, 80.0, 0.0},
        {80.0, 0.0, 80.0, 80.0},
        {80.0, 80.0, 0.0, 80.0},
        {0.0, 80.0, 0.0, 0.0},
    };
    return spec;
}

LbrSpec resistor_lbr() {
    LbrSpec spec;
    spec.library_name = "rlib";
    spec.devicesets = {resistor_deviceset()};
    return spec;
}

SchSpec with_led_polarity_swapped(SchSpec spec) {
    drop_pinref(spec, "N$2", "D1", "A");
    drop_pinref(spec, "GND", "D1", "C");
    find_net(spec, "N$2")->pins.push_back({"D1", "C"});
    find_net(spec, "GND")->pins.push_back({"D1", "A"});
    return spec;
}

SchSpec with_series_resistor_removed(SchSpec spec) {
    drop_part(spec, "R1");
    drop_net(spec, "N$2");
    drop_pinref(spec, "N$1", "R1", "1");
    find_net(spec, "N$1")->pins.push_back({"D1", "A"});
    return spec;
}

SchSpec with_reset_grounded(SchSpec spec) {
    drop_pinref(spec, "RST", "U1", "RST");
    find_net(spec, "GND")->pins.push_back({"U1", "RST"});
    return spec;
}

SchSpec with_reset_network_removed(SchSpec spec) {
    drop_part(spec, "R2");
    drop_net(spec, "RST");
    drop_pinref(spec, "VCC", "R2", "2");
    return spec;
}

SchSpec with_decoupling_cap_removed(SchSpec spec) {
    drop_part(spec, "C1");
    drop_pinref(spec, "GND", "C1", "2");
    drop_pinref(spec, "VCC", "C1", "1");
    return spec;
}

SchSpec with_power_short(SchSpec spec) {
    // A stray wire merging the rails shows up in the file as the MCU's GND
    // pin landing on the VCC net.
    drop_pinref(spec, "GND", "U1", "GND");
    find_net(spec, "VCC")->pins.push_back({"U1", "GND"});
    return spec;
}

SchSpec with_value_removed(SchSpec spec, const std::string& part) {
    for (auto& p : spec.parts)
        if (p.name == part)
            p.value = std::nullopt;
    return spec;
}

SchSpec with_tnames_literal(SchSpec spec) {
    for (auto& ds : spec.devicesets)
        if (ds.package_name == "QFN64")
            ds.package_texts.push_back({"U1", 25, 0.0, 5.08});
    return spec;
}

SchSpec with_pin_detached(SchSpec spec) {
    drop_pinref(spec, "VCC", "C1", "1");
    return spec;
}

BrdSpec with_oversized_outline(BrdSpec spec) {
    spec.outline = {
        {0.0, 0.0, 120.0, 0.0},
        {120.0, 0.0, 120.0, 80.0},
        {120.0, 80.0, 0.0, 80.0},
        {0.0, 80.0, 0.0, 0.0},
    };
    return spec;
}

BrdSpec with_element_outside(BrdSpec spec) {
    for (auto& e : spec.elements)
        if (e.name == "C1") {
            e.x = 200.0;
            e.y = 200.0;
        }
    return spec;
}

BrdSpec with_inner_layer_wire(BrdSpec spec) {
    for (auto& s : spec.signals)
        if (s.name == "GND")
            s.wires.push_back({3, 40.0, 40.0, 45.0, 45.0, 0.254});
    return spec;
}

SchSpec reference_sch() {
    SchSpec spec;
    spec.library_name = "quad-lib";

    DeviceSetSpec mcu;
    mcu.name = "ATMEGA128RFA1";
    mcu.prefix = "U";
    mcu.device_name = "";
    mcu.package_name = "QFN64R";
    int pad = 1;
    auto add_pin = [&](const std::string& name, const std::string& dir) {
        mcu.pins.push_back({name, dir, std::to_string(pad++)});
    };
    std::vector<std::string> io_pins;
    for (char bank : {'B', 'C', 'E'})
        for (int i = 0; i < 8; ++i)
            io_pins.push_back(std::string("P") + bank + std::to_string(i));
    for (int i = 2; i < 8; ++i)
        io_pins.push_back("PD" + std::to_string(i));
    for (const auto& p : io_pins)
        add_pin(p, "io");
    add_pin("PD0", "io"); // I2C clock
    add_pin("PD1", "io"); // I2C data
    add_pin("RST", "in");
    add_pin("VCC", "pwr");
    add_pin("AVCC", "pwr");
    add_pin("GND", "pwr");
    add_pin("AGND", "pwr");
    for (int i = 1; i <= 4; ++i)
        add_pin("NC" + std::to_string(i), "nc");

    DeviceSetSpec imu;
    imu.name = "LSM9DS1";
    imu.prefix = "U";
    imu.device_name = "";
    imu.package_name = "LGA24";
    imu.pins = {{"SCL", "in", "1"}, {"SDA", "io", "2"}, {"VDD", "pwr", "3"}, {"GND", "pwr", "4"}};

    spec.devicesets = {mcu, imu, resistor_deviceset(), led_deviceset(), capacitor_deviceset()};

    spec.parts.push_back({"U1", "ATMEGA128RFA1", std::nullopt, {}});
    spec.parts.push_back({"U2", "LSM9DS1", std::nullopt, {}});
    spec.parts.push_back({"R100", "RESISTOR", "10k", {}});
    for (int i = 1; i <= 5; ++i)
        spec.parts.push_back({"C" + std::to_string(i), "CAPACITOR", "100n", {}});

    SheetSpec sheet;
    int slot = 0;
    auto place = [&](const std::string& part) {
        sheet.instances.push_back(
            {part, 7.62 * (slot % 12), 5.08 * (slot / 12), ""});
        ++slot;
    };
    place("U1");
    place("U2");
    place("R100");
    for (int i = 1; i <= 5; ++i)
        place("C" + std::to_string(i));

    NetSpec vcc{"VCC", {{"U1", "VCC"}, {"U1", "AVCC"}, {"U2", "VDD"}, {"R100", "2"}}, 2};
    NetSpec gnd{"GND", {{"U1", "GND"}, {"U1", "AGND"}, {"U2", "GND"}}, 2};
    for (int i = 1; i <= 5; ++i) {
        std::string c = "C" + std::to_string(i);
        vcc.pins.push_back({c, "1"});
        gnd.pins.push_back({c, "2"});
    }

    sheet.nets.push_back({"RST", {{"U1", "RST"}, {"R100", "1"}}, 1});
    sheet.nets.push_back({"SCL", {{"U1", "PD0"}, {"U2", "SCL"}}, 1});
    sheet.nets.push_back({"SDA", {{"U1", "PD1"}, {"U2", "SDA"}}, 1});

    // one LED chain per io pin: MCU -> series resistor -> LED -> ground
    int net_id = 1;
    for (size_t i = 0; i < io_pins.size(); ++i) {
        std::string r = "R" + std::to_string(i + 1);
        std::string d = "D" + std::to_string(i + 1);
        spec.parts.push_back({r, "RESISTOR", "330", {}});
        spec.parts.push_back({d, "LED", std::nullopt, {}});
        place(r);
        place(d);
        std::string n1 = "N$" + std::to_string(net_id++);
        std::string n2 = "N$" + std::to_string(net_id++);
        sheet.nets.push_back({n1, {{"U1", io_pins[i]}, {r, "1"}}, 1});
        sheet.nets.push_back({n2, {{r, "2"}, {d, "A"}}, 1});
        gnd.pins.push_back({d, "C"});
    }
    sheet.nets.push_back(vcc);
    sheet.nets.push_back(gnd);
    spec.sheets = {sheet};
    return spec;
}

SchSpec random_sch(std::mt19937& rng) {
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    auto chance = [&](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };

    SchSpec spec;
    spec.library_name = "gen-lib";
    spec.devicesets = {mcu_deviceset(), resistor_deviceset(), led_deviceset(),
                       capacitor_deviceset()};

    static const std::vector<std::string> kNetPool = {
        "N$1", "N$2", "N$3", "N$4", "N$5", "N$6", "GND", "VCC", "RST", "3V3", "SIG_A", "SIG_B"};

    int part_count = pick(1, 8);
    int sheet_count = pick(1, 2);
    spec.sheets.resize(sheet_count);

    std::vector<int> sheet_of_part(part_count);
    for (int i = 0; i < part_count; ++i) {
        const DeviceSetSpec& ds = spec.devicesets[pick(0, 3)];
        PartSpec part;
        part.name = "P" + std::to_string(i + 1);
        part.deviceset = ds.name;
        if (ds.uservalue || chance(0.3))
            part.value = "v" + std::to_string(pick(1, 3));
        if (chance(0.2))
            part.attributes["ROLE"] = "role" + std::to_string(pick(1, 2));
        spec.parts.push_back(part);
        int sheet = pick(0, sheet_count - 1);
        sheet_of_part[i] = sheet;
        spec.sheets[sheet].instances.push_back(
            {part.name, 2.54 * pick(0, 20), 2.54 * pick(0, 20), ""});
    }

    // Group pin attachments by (sheet, net name).
    std::map<std::pair<int, std::string>, NetSpec> nets;
    for (int i = 0; i < part_count; ++i) {
        const DeviceSetSpec* ds = spec.deviceset(spec.parts[i].deviceset);
        for (const auto& pin : ds->pins) {
            if (!chance(0.75))
                continue;
            const std::string& net = kNetPool[pick(0, static_cast<int>(kNetPool.size()) - 1)];
            auto key = std::make_pair(sheet_of_part[i], net);
            auto [it, inserted] = nets.try_emplace(key);
            if (inserted) {
                it->second.name = net;
                it->second.segments = pick(1, 2);
            }
            it->second.pins.push_back({spec.parts[i].name, pin.name});
        }
    }
    for (auto& [key, net] : nets)
        spec.sheets[key.first].nets.push_back(net);
    // occasionally an empty net (wires only, no pinrefs)
    if (chance(0.15))
        spec.sheets[0].nets.push_back({"EMPTY", {}, 1});
    return spec;
}

std::string random_pattern(std::mt19937& rng, const SchSpec& spec, int max_hops,
                           bool seed_from_path) {
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    auto chance = [&](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };

    // merged connectivity: net -> (part, pin)*
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> members;
    for (const auto& sheet : spec.sheets)
        for (const auto& net : sheet.nets)
            for (const auto& pr : net.pins)
                members[net.name].emplace_back(pr.part, pr.pin);

    auto part_step = [&](const std::string& part_name) -> std::string {
        if (part_name.empty() || chance(0.3))
            return "part(*)";
        if (chance(0.5))
            return "part(name=" + part_name + ")";
        const DeviceSetSpec* ds = spec.deviceset_of_part(part_name);
        if (ds && chance(0.7))
            return "part(deviceset=" + ds->name + ")";
        return "part(name=" + part_name + ")";
    };
    auto pin_step = [&](const std::string& pin) {
        return (pin.empty() || chance(0.4)) ? std::string("pin(*)") : "pin(" + pin + ")";
    };
    auto net_step = [&](const std::string& net) {
        return (net.empty() || chance(0.4)) ? std::string("net(*)") : "net(" + net + ")";
    };

    std::ostringstream out;
    int hops = pick(1, max_hops);

    if (seed_from_path && !members.empty()) {
        // random walk over the real connectivity
        std::vector<std::string> net_names;
        for (const auto& [name, pins] : members)
            if (!pins.empty())
                net_names.push_back(name);
        if (!net_names.empty()) {
            std::string net = net_names[pick(0, static_cast<int>(net_names.size()) - 1)];
            auto& first = members[net][pick(0, static_cast<int>(members[net].size()) - 1)];
            std::string cur_part = first.first;
            out << part_step(cur_part) << " " << pin_step(first.second) << " " << net_step(net);
            std::string prev_net = net;
            std::set<std::string> used = {cur_part};
            for (int h = 0;; ++h) {
                // pick an entry pin on a new part
                std::vector<std::pair<std::string, std::string>> candidates;
                for (const auto& m : members[prev_net])
                    if (!used.count(m.first))
                        candidates.push_back(m);
                std::string entry_part, entry_pin;
                if (candidates.empty()) {
                    out << " pin(*) part(*)";
                    break;
                }
                auto& entry = candidates[pick(0, static_cast<int>(candidates.size()) - 1)];
                entry_part = entry.first;
                entry_pin = entry.second;
                used.insert(entry_part);
                out << " " << pin_step(entry_pin) << " " << part_step(entry_part);
                if (h + 1 >= hops)
                    break;
                // pick an exit pin of this part on a different net
                std::vector<std::pair<std::string, std::string>> exits; // (pin, net)
                for (const auto& [net_name, pins] : members) {
                    if (net_name == prev_net)
                        continue;
                    for (const auto& m : pins)
                        if (m.first == entry_part)
                            exits.emplace_back(m.second, net_name);
                }
                if (exits.empty())
                    break;
                auto& exit = exits[pick(0, static_cast<int>(exits.size()) - 1)];
                out << " " << pin_step(exit.first) << " " << net_step(exit.second);
                prev_net = exit.second;
            }
            return out.str();
        }
    }

    // fully random pattern
    static const std::vector<std::string> kPins = {"1", "2", "A", "C", "PB5", "RST", "VCC", "GND"};
    static const std::vector<std::string> kNets = {"N$1", "N$2", "N$3", "GND", "VCC", "RST"};
    static const std::vector<std::string> kDevicesets = {"ATMEGA12?", "RESISTOR", "LED", "CAP*"};
    auto rand_part = [&]() -> std::string {
        int mode = pick(0, 2);
        if (mode == 0)
            return "part(*)";
        if (mode == 1)
            return "part(name=P" + std::to_string(pick(1, 8)) + ")";
        return "part(deviceset=" + kDevicesets[pick(0, 3)] + ")";
    };
    auto rand_pin = [&]() {
        return chance(0.4) ? std::string("pin(*)") : "pin(" + kPins[pick(0, 7)] + ")";
    };
    auto rand_net = [&]() {
        return chance(0.4) ? std::string("net(*)") : "net(" + kNets[pick(0, 5)] + ")";
    };
    out << rand_part();
    for (int h = 0; h < hops; ++h)
        out << " " << rand_pin() << " " << rand_net() << " " << rand_pin() << " " << rand_part();
    return out.str();
}

std::string fixtures_dir() {
    if (const char* env = std::getenv("PCBLINT_FIXTURES"))
        return env;
    return "tests/fixtures";
}

std::string read_fixture(const std::string& name) {
    std::string path = fixtures_dir() + "/" + name;
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read fixture " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace testsupport
