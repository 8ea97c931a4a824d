"""Terminal summary for the acceptance criteria (tests/test_acceptance.py)."""

CRITERIA = {
    "test_c1_fertilizer_worked_example": "C1 fertilizer worked example",
    "test_c2_adc_moisture_conversion": "C2 ADC/moisture conversion",
    "test_c3_modbus_codec": "C3 RTU codec round-trip + CRC",
    "test_c4_metrics_oracle": "C4 metrics vs brute-force oracle",
    "test_c5_control_loop": "C5 threshold control loop",
    "test_c6_ml_pipeline": "C6 ML pipeline benchmark",
    "test_c7_determinism": "C7 artifact determinism",
    "test_c8_gateway_replay": "C8 gateway log replay",
}

_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.split("::")[-1]
    if name in CRITERIA:
        _results[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, label in CRITERIA.items():
        outcome = _results.get(name, "SKIPPED")
        terminalreporter.write_line(f"{label:<40} {outcome}")
