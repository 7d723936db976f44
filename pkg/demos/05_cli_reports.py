# %% [markdown]
# # Running experiments through the command-line layer
#
# Every experiment returns a verdict and a JSON document; the same entry points
# back the `lcsprobe` command.

# %%
from lcsprobe import cli

print(cli.format_listing())

# %%
verdict, doc = cli.run("unbounded", {"x": "1:0.5,3:0.25"})
print(verdict.value)
print(cli.dumps(doc["report"]))

# %% [markdown]
# The exit code follows the verdict: 0 pass, 2 fail, 3 inconclusive.

# %%
print(cli.main(["escape", "--out", "escape.json", "--force"]))
print(cli.main(["cauchy", "--integrand", "conj", "--out", "conj.json", "--force"]))
