"""
Utility modules for msp-dbg
Contains work directory layout, manifest serialisation, config creation and CSV export helpers
"""
