from offdelta.scan.sweep import (
    Crossing,
    ScanResult,
    WidthTable,
    infinite_crossings,
    sweep_c,
    sweep_g,
    sweep_infinite,
    sweep_widths,
)
