"""A small level/power study.

Rejection rates at 5% over a few replications per cell. Full-size runs use
R=200 or more (see the power-study CLI command); expect minutes per cell.
"""
from depthreg.simlab import power_study

table = power_study(models=[1], ns=[100], a_values=[0.0, 8.0], levels=[0.05], R=20, B=100, seed=0)
header, rows = table.to_csv_rows()
print(header)
for row in rows:
    print(row)
