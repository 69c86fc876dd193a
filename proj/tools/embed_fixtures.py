#!/usr/bin/env python3
"""Regenerates include/lvg/fixture_data.hpp from fixtures/*.csv."""
import pathlib

root = pathlib.Path(__file__).resolve().parent.parent
files = sorted((root / "fixtures").glob("*.csv"))
out = [
    "#pragma once",
    "",
    "// Generated by tools/embed_fixtures.py from fixtures/*.csv; do not edit.",
    "",
    "#include <string_view>",
    "",
    "namespace lvg::fixtures {",
    "",
    "struct File {",
    "    std::string_view name;",
    "    std::string_view text;",
    "};",
    "",
    "inline constexpr File kFiles[] = {",
]
for f in files:
    out.append(f'    {{"{f.stem}", R"csv({f.read_text()})csv"}},')
out += ["};", "", "} // namespace lvg::fixtures", ""]
(root / "include" / "lvg" / "fixture_data.hpp").write_text("\n".join(out))
