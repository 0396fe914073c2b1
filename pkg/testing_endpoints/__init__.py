# Verification of work directories against the in-memory reference builder
