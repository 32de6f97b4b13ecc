# hecke-workbench
