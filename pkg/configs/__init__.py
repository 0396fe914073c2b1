"""
Configuration module for msp-dbg
Contains run defaults, pydantic run models, literal types and on-disk binary formats
"""
