#!/usr/bin/env python3
"""Rebuild data/snapshot_2021-01-30.csv.

The snapshot is a reconstruction, not a download. Country membership, the
vaccination start indicator, vaccine providers and Soft Power 30 membership
follow the public record for 2021-01-30. Covariate levels are approximate
values for each country, passed through one increasing affine map per variable
(on the modelling scale) so that the started / not-started group means agree
with the published descriptive statistics for the original sample. The map is
monotone, so every country keeps its rank on every variable. Missing cells
reproduce the original per-model sample sizes.

Run from the repository root:  python3 data/build_snapshot.py
"""

import csv
import datetime as dt
import math
import statistics
from pathlib import Path

END = dt.date(2021, 1, 30)

# iso3|name|gdp (bn USD)|gdp pc ppp (k int$)|gov_eff|pop 65+ (%)|cases pm|exports %|health %|military %|gov response
RAW = """
AUT|Austria|446|59.0|1.45|19.0|46000|56|10.4|0.7|60
BEL|Belgium|533|54.5|1.17|19.0|61000|82|10.7|0.9|62
BGR|Bulgaria|68|24.6|0.0|21.7|31000|64|8.1|1.6|50
HRV|Croatia|60|29.9|0.45|20.9|56000|52|7.0|1.7|48
CYP|Cyprus|25|41.2|1.0|14.0|36000|74|7.0|1.6|58
CZE|Czechia|250|43.0|0.9|19.8|95000|74|7.8|1.2|55
DNK|Denmark|350|60.0|1.9|20.0|34000|58|10.0|1.3|58
EST|Estonia|31|38.8|1.3|20.0|35000|73|6.7|2.1|45
FIN|Finland|269|51.3|1.9|22.6|8500|40|9.1|1.5|45
FRA|France|2716|50.0|1.4|20.7|49000|32|11.3|1.9|65
DEU|Germany|3846|57.0|1.6|21.6|26000|47|11.7|1.3|60
GRC|Greece|205|31.4|0.4|22.3|15000|40|7.8|2.6|62
HUN|Hungary|163|34.0|0.5|19.7|37000|82|6.4|1.2|55
IRL|Ireland|399|89.0|1.0|14.2|40000|127|6.7|0.3|65
ITA|Italy|2001|44.2|0.3|23.0|42000|32|8.7|1.4|68
LVA|Latvia|34|32.0|1.0|20.3|35000|60|6.2|2.0|48
LTU|Lithuania|54|39.0|1.0|19.7|66000|77|6.8|2.0|52
LUX|Luxembourg|71|118.0|1.7|14.4|79000|210|5.4|0.6|55
MLT|Malta|15|46.0|0.8|20.4|40000|140|8.9|0.5|52
NLD|Netherlands|907|59.5|1.8|19.6|56000|83|10.1|1.3|58
POL|Poland|596|34.0|0.4|18.5|40000|56|6.5|2.0|58
PRT|Portugal|238|36.0|1.0|22.4|71000|44|9.5|1.6|62
ROU|Romania|250|31.0|-0.3|19.0|37000|40|5.7|2.0|56
SVK|Slovakia|105|32.0|0.6|16.7|48000|92|6.7|1.7|55
SVN|Slovenia|54|40.0|1.1|20.7|81000|83|8.2|1.1|55
ESP|Spain|1394|42.0|1.0|19.7|60000|35|9.0|1.2|65
SWE|Sweden|531|55.0|1.8|20.3|57000|45|11.0|1.1|45
GBR|United Kingdom|2827|49.0|1.4|18.7|55000|31|10.0|2.2|65
CHE|Switzerland|703|71.0|2.0|18.8|60000|65|12.0|0.7|50
NOR|Norway|403|66.0|1.9|17.3|11500|35|10.5|1.8|48
ISL|Iceland|24|60.0|1.6|15.2|17500|44|8.6||45
SRB|Serbia|51|19.0|0.0|19.1|54000|51|8.7|2.0|58
RUS|Russia|1700|29.0|-0.1|15.1|26000|28|5.3|3.9|55
TUR|Turkey|761|28.0|0.0|8.7|29000|33|4.3|2.7|62
ALB|Albania|15|14.5|0.0|14.2|26000|31|5.3|1.3|60
BIH|Bosnia and Herzegovina|20|15.7|-0.6|16.5|36000|40|9.2|0.8|55
MKD|North Macedonia|12.6|17.0|0.0|13.7|44000|62|7.3|1.2|58
MNE|Montenegro|5.5|22.0|0.1|15.0|98000|43|8.4|1.6|55
XKX|Kosovo|8|12.0|-0.3|8.5|32000|29||0.8|55
MDA|Moldova|12|13.6|-0.4|12.0|40000|30|6.4|0.4|60
UKR|Ukraine|154|13.3|-0.3|16.8|28000|41|7.7|3.4|60
BLR|Belarus|63|20.0|-0.3|15.2|26000|62|5.9|1.2|20
ARM|Armenia|13.6|14.2|0.0|11.7|57000|38|10.0|4.9|55
AZE|Azerbaijan|48|15.0|-0.2|6.7|22000|48|4.0|4.0|62
GEO|Georgia|17.5|15.6|0.7|15.0|65000|54|7.6|2.0|60
USA|United States|21400|65.0|1.5|16.2|79000|12|17.0|3.4|58
CAN|Canada|1736|50.0|1.7|18.0|20000|32|10.8|1.3|65
MEX|Mexico|1269|20.5|-0.2|7.6|14000|39|5.4|0.5|60
CHL|Chile|282|25.0|1.0|12.0|37000|28|9.1|1.8|70
CRI|Costa Rica|62|21.0|0.4|10.0|38000|33|7.3||60
ARG|Argentina|445|23.0|-0.1|11.2|43000|18|9.6|0.7|78
BRA|Brazil|1840|15.3|-0.5|9.6|43000|14|9.5|1.4|62
ECU|Ecuador|107|11.8|-0.4|7.4|14000|23|8.1|2.4|68
PAN|Panama|67|32.0|0.0|8.4|77000|41|7.3||75
COL|Colombia|323|15.0|0.0|8.8|42000|16|7.7|3.2|70
PER|Peru|226|13.4|-0.3|8.4|34000|24|5.2|1.2|75
BOL|Bolivia|41|9.1|-0.6|7.2|19000|25|6.9|1.4|72
PRY|Paraguay|38|13.3|-0.7|6.4|19000|35|7.2|1.0|65
URY|Uruguay|56|23.5|0.6|15.1|10000|26|9.2|2.0|45
VEN|Venezuela|||-1.8|7.9|4300|15|3.6|0.5|75
GUY|Guyana|5.2|19.0|-0.3|6.8|10000|60|5.9|1.2|55
SUR|Suriname|3.9|17.0|-0.6|7.2|16000|48|6.1|1.0|55
CUB|Cuba|100|10.0|-0.4|15.9|2300|15|11.2|2.9|60
DOM|Dominican Republic|89|19.0|-0.5|7.3|15000|23|6.2|0.7|65
HTI|Haiti|15|3.0|-2.0|5.1|1000|20|7.7||40
JAM|Jamaica|16|10.0|0.4|9.1|5900|35|6.1|1.4|60
TTO|Trinidad and Tobago|24|27.0|0.0|11.0|5300|50|7.0|0.8|60
BHS|Bahamas|13|36.0|0.6|7.6|21000|35|6.3|0.8|70
BRB|Barbados|5.2|16.0|0.4|16.2|4000|40|6.6|0.9|60
BLZ|Belize|1.9|7.2|-0.4|4.9|30000|57|5.7|1.3|60
GTM|Guatemala|77|9.0|-0.7|4.9|9500|18|5.7|0.4|65
HND|Honduras|25|5.9|-0.6|4.8|15000|42|7.6|1.6|75
SLV|El Salvador|27|9.1|-0.4|8.5|8500|29|7.1|0.9|70
NIC|Nicaragua|12.5|5.8|-0.9|5.4|800|41|8.6|0.6|10
ATG|Antigua and Barbuda|1.7|22.0|0.1|9.0|2000|50|5.2|0.6|55
KNA|Saint Kitts and Nevis|1.05|29.0|0.4|11.0|700|55|5.4|0.6|55
LCA|Saint Lucia|2.1|16.0|0.3|9.8|3400|50|4.5|0.4|55
VCT|Saint Vincent and the Grenadines|0.8|13.0|0.4|10.2|1000|35|4.4|0.3|55
GRD|Grenada|1.2|17.0|0.3|9.4|1300|55|4.9|0.5|55
DMA|Dominica|0.6|12.0|0.1|10.0|1600|35|5.5|0.3|55
ABW|Aruba|3.3|38.0|1.2|14.0|70000|70|12.0||60
CUW|Curacao|3.1|27.0|0.7|17.0|23000|75|||60
EGY|Egypt|303|12.6|-0.4|5.3|1600|18|4.7|1.2|70
MAR|Morocco|120|7.9|-0.1|7.4|12800|39|5.3|3.1|75
DZA|Algeria|171|12.0|-0.6|6.7|2400|23|6.2|6.0|75
TUN|Tunisia|39|11.2|-0.2|8.7|17500|50|7.3|2.8|60
LBY|Libya|52|15.0|-1.8|4.5|19000|60|||60
SDN|Sudan|19|4.0|-1.6|3.6|600|10|4.5|1.0|60
NGA|Nigeria|448|5.3|-1.0|2.7|630|15|3.0|0.6|50
GHA|Ghana|67|5.6|-0.2|3.1|2200|36|3.5|0.4|55
CIV|Cote d'Ivoire|59|5.5|-0.5|2.9|1000|23|4.5|1.1|45
SEN|Senegal|23|3.5|-0.1|3.1|1400|25|4.1|1.9|55
MLI|Mali|17|2.4|-1.0|2.5|400|22|3.9|2.9|40
BFA|Burkina Faso|16|2.2|-0.6|2.4|550|28|5.6|2.3|35
NER|Niger|13|1.3|-0.7|2.6|200|15|6.3|2.3|35
TCD|Chad|11|1.6|-1.5|2.5|220|30|4.5|2.5|40
CMR|Cameroon|39|3.8|-0.8|2.7|1100|18|3.6|1.0|40
GAB|Gabon|17|16.0|-0.8|3.6|4400|55|2.8|1.6|60
COG|Republic of the Congo|12.3|3.8|-1.3|2.7|1500|60|2.9|1.8|55
COD|Democratic Republic of the Congo|50|1.1|-1.6|3.0|250|30|3.3|0.7|40
CAF|Central African Republic|2.2|1.0|-1.7|2.8|1000|14|5.4|1.5|35
AGO|Angola|89|6.9|-1.1|2.2|600|40|2.5|1.6|60
ZMB|Zambia|23|3.6|-0.7|2.1|2900|35|4.9|1.2|35
ZWE|Zimbabwe|21|3.0|-1.2|3.0|2300|25|4.7|1.6|70
MOZ|Mozambique|15|1.3|-0.8|2.9|1300|30|5.0|1.0|55
MWI|Malawi|7.7|1.1|-0.7|2.6|1200|25|9.3|0.7|40
TZA|Tanzania|63|2.8|-0.6|2.6|8|15|3.6|1.0|15
KEN|Kenya|95|4.5|-0.4|2.4|1900|12|5.2|1.2|55
UGA|Uganda|35|2.3|-0.6|2.0|870|18|6.5|2.0|60
RWA|Rwanda|10|2.3|0.2|3.0|1200|22|6.4|1.3|70
BDI|Burundi|3|0.8|-1.2|2.3|150|9|7.5|2.0|15
ETH|Ethiopia|96|2.3|-0.6|3.0|1200|8|3.3|0.5|50
ERI|Eritrea|2|1.6|-1.2|3.7|550||4.5||70
DJI|Djibouti|3.3|5.5|-0.9|4.5|6000|140|2.3|3.4|50
SOM|Somalia|5||-2.2|2.8|300|15|||35
SSD|South Sudan|4||-2.4|3.4|300||9.8|2.9|35
ZAF|South Africa|351|12.9|0.3|5.5|24000|30|8.3|1.0|65
NAM|Namibia|12.5|9.6|0.1|3.6|14000|36|8.6|3.4|50
BWA|Botswana|18.3|18.0|0.4|4.3|9000|33|6.1|2.9|65
LSO|Lesotho|2.4|2.8|-0.7|4.8|4000|45|9.3|1.7|55
SWZ|Eswatini|4.4|9.0|-0.5|4.0|13000|45|7.0|1.8|55
MDG|Madagascar|14|1.7|-1.0|3.0|700|26|5.3|0.7|45
MUS|Mauritius|14|23.0|0.9|12.0|450|40|6.6||55
SYC|Seychelles|1.7|30.0|0.4|8.0|9000|87|5.2|1.3|55
COM|Comoros|1.2|3.3|-1.2|3.0|1400|12|5.0|0.4|50
CPV|Cabo Verde|2.0|7.3|0.3|4.7|26000|50|5.2|0.5|55
STP|Sao Tome and Principe|0.43|4.0|-0.7|3.0|4500|12|6.0||50
GNQ|Equatorial Guinea|11|19.0|-1.4|2.5|3800|45|3.0|1.0|50
GNB|Guinea-Bissau|1.4|2.0|-1.5|2.8|1300|20|7.3|1.6|50
GIN|Guinea|13.6|2.6|-0.9|2.9|1100|35|4.0|2.4|55
SLE|Sierra Leone|4|1.8|-1.0|3.0|480|20|8.8|0.7|50
LBR|Liberia|3.1|1.5|-1.3|3.3|380|20|8.5|0.8|45
TGO|Togo|5.5|2.2|-0.8|2.9|520|25|6.2|2.0|55
BEN|Benin|14|3.4|-0.4|3.3|300|27|2.6|0.6|40
MRT|Mauritania|7.6|5.7|-0.8|3.2|3700|40|3.2|2.6|55
GMB|Gambia|1.8|2.3|-0.6|2.6|1600|20|3.3|0.9|45
CHN|China|14300|16.8|0.5|12.0|63|18.5|5.4|1.7|70
IND|India|2870|7.0|0.2|6.6|7800|19|3.0|2.4|75
IDN|Indonesia|1119|12.3|0.2|6.3|3800|18|2.9|0.7|60
SGP|Singapore|372|101.0|2.2|12.4|10200|174|4.1|3.2|65
JPN|Japan|5080|43.0|1.6|28.0|3100|18|10.9|1.0|45
KOR|South Korea|1647|44.0|1.2|15.8|1500|39|8.2|2.7|55
AUS|Australia|1397|51.0|1.6|15.9|1130|24|9.3|1.9|65
NZL|New Zealand|207|44.0|1.7|15.9|460|27|9.2|1.5|45
HKG|Hong Kong|366|62.0|1.8|18.0|1400|180|||60
MAC|Macao|55|125.0|1.0|11.0|70|75|||40
MYS|Malaysia|365|29.0|1.0|7.0|6700|65|3.8|1.0|65
THA|Thailand|544|19.0|0.4|12.4|280|60|3.8|1.4|55
VNM|Vietnam|262|8.4|0.0|7.9|16|107|5.3|2.3|60
PHL|Philippines|377|9.3|0.1|5.3|4700|28|4.4|1.0|78
KHM|Cambodia|27|4.4|-0.5|4.8|28|62|6.0|2.2|40
LAO|Laos|18.7|8.2|-0.8|4.2|6|33|2.5||50
MMR|Myanmar|76|5.0|-1.0|6.0|2600|28|4.7|2.9|60
BGD|Bangladesh|303|5.3|-0.7|5.2|3200|15|2.3|1.3|70
NPL|Nepal|34|3.9|-0.8|5.8|9200|7|5.8|1.3|60
LKA|Sri Lanka|84|13.0|-0.1|11.0|3000|23|3.8|1.9|60
MDV|Maldives|5.6|20.0|-0.2|3.7|29000|70|8.0||60
BTN|Bhutan|2.5|12.0|0.5|6.2|1100|30|3.2||70
PAK|Pakistan|278|5.0|-0.6|4.3|2500|10|3.2|4.0|60
AFG|Afghanistan|19|2.3|-1.5|2.6|1400|19|9.4|1.0|45
IRN|Iran|580|13.0|-0.6|6.6|17000|22|8.7|2.3|55
IRQ|Iraq|234|11.0|-1.3|3.4|15500|40|4.1|3.5|70
SYR|Syria|||-1.9|4.6|800|20|3.6|4.0|60
JOR|Jordan|44|10.3|0.1|3.9|31000|35|7.6|4.7|80
LBN|Lebanon|52|14.0|-0.6|7.3|43000|21|8.6|4.2|65
ISR|Israel|395|40.0|1.3|12.0|69000|29|7.5|5.3|70
PSE|Palestine|17|6.2|-0.5|3.3|32000|18|||60
SAU|Saudi Arabia|793|48.0|0.3|3.4|10600|31|5.7|8.0|70
ARE|United Arab Emirates|421|70.0|1.4|1.2|30000|95|4.3|5.6|65
QAT|Qatar|176|95.0|0.6|1.4|54000|52|2.9|3.0|70
KWT|Kuwait|135|51.0|-0.1|2.9|38000|52|5.5|5.6|72
BHR|Bahrain|38|46.0|0.3|2.6|59000|70|4.7|4.1|65
OMN|Oman|76|28.0|0.2|2.6|26000|50|4.1|11.0|65
YEM|Yemen|||-2.2|2.9|70|10|4.3|4.0|40
KAZ|Kazakhstan|181|27.0|0.1|7.7|13000|35|2.8|1.0|65
UZB|Uzbekistan|58|7.3|-0.5|4.6|2300|28|5.9||60
KGZ|Kyrgyzstan|8.5|5.5|-0.8|4.6|13000|37|4.5|1.6|55
TJK|Tajikistan|8|3.5|-0.9|3.1|1400|14|7.0||20
TKM|Turkmenistan|40|16.0|-1.2|4.7|||6.6||
MNG|Mongolia|13.9|12.8|-0.3|4.3|500|63|3.8|0.7|70
PRK|North Korea|||-1.5|9.5|||||
TLS|Timor-Leste|1.7|3.4|-0.8|4.4|40|15|4.0|0.8|50
PNG|Papua New Guinea|24|4.4|-0.6|3.5|95|40|2.3|0.3|45
FJI|Fiji|5.5|14.0|0.0|5.8|60|45|3.8|1.5|55
SLB|Solomon Islands|1.6|2.6|-0.7|3.7|25|30|4.5||40
VUT|Vanuatu|0.9|3.1|-0.6|4.5|3|45|3.4||40
WSM|Samoa|0.85|6.5|0.2|5.6|10|30|5.3|0.3|40
MHL|Marshall Islands|0.24|5.0|-1.0|5.0|100|35|16.0||40
BRN|Brunei|13.5|64.0|1.1|5.4|400|60|2.4|3.0|55
"""

# iso3 -> (doses per hundred, first vaccination, last vaccination data, providers)
STARTED = {
    "AUT": (2.7, "2021-01-04", "2021-01-29", "W"),
    "BEL": (2.3, "2021-01-05", "2021-01-28", "W"),
    "BGR": (0.9, "2020-12-27", "2021-01-29", "W"),
    "HRV": (1.8, "2020-12-27", "2021-01-29", "W"),
    "CYP": (2.5, "2021-01-06", "2021-01-29", "W"),
    "CZE": (2.3, "2020-12-27", "2021-01-30", "W"),
    "DNK": (4.3, "2020-12-27", "2021-01-29", "W"),
    "EST": (3.3, "2020-12-28", "2021-01-30", "W"),
    "FIN": (2.5, "2021-01-08", "2021-01-29", "W"),
    "FRA": (2.3, "2020-12-27", "2021-01-30", "W"),
    "DEU": (2.7, "2020-12-27", "2021-01-30", "W"),
    "GRC": (2.4, "2021-01-05", "2021-01-30", "W"),
    "HUN": (2.4, "2020-12-27", "2021-01-30", "W"),
    "IRL": (3.3, "2021-01-04", "2021-01-27", "W"),
    "ITA": (3.4, "2020-12-27", "2021-01-30", "W"),
    "LVA": (1.2, "2021-01-12", "2021-01-30", "W"),
    "LTU": (2.9, "2020-12-27", "2021-01-30", "W"),
    "LUX": (2.5, "2021-01-12", "2021-01-28", "W"),
    "MLT": (4.4, "2020-12-27", "2021-01-30", "W"),
    "NLD": (1.6, "2021-01-06", "2021-01-30", "W"),
    "POL": (3.7, "2020-12-27", "2021-01-30", "W"),
    "PRT": (2.6, "2020-12-27", "2021-01-30", "W"),
    "ROU": (2.7, "2020-12-27", "2021-01-30", "W"),
    "SVK": (2.0, "2021-01-08", "2021-01-29", "W"),
    "SVN": (3.4, "2021-01-04", "2021-01-30", "W"),
    "ESP": (3.0, "2021-01-04", "2021-01-29", "W"),
    "SWE": (1.8, "2021-01-08", "2021-01-29", "W"),
    "GBR": (13.1, "2021-01-10", "2021-01-30", "W"),
    "CHE": (2.3, "2020-12-23", "2021-01-29", "W"),
    "NOR": (2.0, "2020-12-27", "2021-01-29", "W"),
    "ISL": (2.5, "2020-12-29", "2021-01-29", "W"),
    "SRB": (3.8, "2020-12-24", "2021-01-30", "WCR"),
    "RUS": (1.2, "2021-01-03", "2021-01-28", "R"),
    "TUR": (2.0, "2021-01-14", "2021-01-30", "C"),
    "USA": (7.1, "2020-12-20", "2021-01-30", "W"),
    "CAN": (2.4, "2020-12-14", "2021-01-30", "W"),
    "MEX": (0.6, "2020-12-24", "2021-01-30", "W"),
    "CHL": (0.3, "2020-12-24", "2021-01-30", "W"),
    "CRI": (1.0, "2020-12-24", "2021-01-29", "W"),
    "ARG": (0.9, "2020-12-29", "2021-01-30", "R"),
    "BRA": (0.9, "2021-01-17", "2021-01-30", "WC"),
    "ECU": (0.01, "2021-01-21", "2021-01-29", "W"),
    "PAN": (0.1, "2021-01-20", "2021-01-30", "W"),
    "ISR": (46.7, "2020-12-19", "2021-01-30", "W"),
    "ARE": (27.1, "2020-12-25", "2021-01-30", "WC"),
    "BHR": (9.6, "2020-12-23", "2021-01-30", "WC"),
    "SAU": (1.5, "2021-01-08", "2021-01-28", "W"),
    "KWT": (1.4, "2020-12-28", "2021-01-26", "W"),
    "OMN": (0.9, "2020-12-27", "2021-01-29", "W"),
    "QAT": (1.8, "2020-12-23", "2021-01-28", "W"),
    "MAR": (0.05, "2021-01-28", "2021-01-30", "WC"),
    "CHN": (1.6, "2020-12-15", "2021-01-30", "C"),
    "IND": (0.25, "2021-01-16", "2021-01-30", "W"),
    "IDN": (0.2, "2021-01-13", "2021-01-30", "C"),
    "SGP": (1.9, "2020-12-30", "2021-01-30", "W"),
    "SYC": (22.0, "2021-01-10", "2021-01-30", "WC"),
}

SOFT_POWER_30 = {
    "FRA", "GBR", "DEU", "SWE", "USA", "CHE", "CAN", "JPN", "AUS", "NLD",
    "NOR", "DNK", "FIN", "ITA", "NZL", "ESP", "IRL", "BEL", "AUT", "KOR",
    "LUX", "SGP", "PRT", "POL", "CZE", "GRC", "BRA", "CHN", "HUN", "RUS",
}

# No government response series for these countries.
NO_RESPONSE = {
    "PRK", "TKM", "ATG", "GUY", "MNE", "BRN", "TLS", "MKD", "CUW", "ABW",
    "MHL", "GAB", "VUT", "GNQ", "GNB", "CPV", "LAO", "MDV", "BTN", "ARM",
    "SLB", "PSE", "XKX", "BHS",
}

# (mean, sd) per start group on the modelling scale: (not started, started).
# Only the means drive the map; the standard deviations are kept for reference.
# The government response index is left on its recorded scale.
TARGETS = {
    "cases": ((7.75, 2.28), (10.21, 1.17)),
    "gdp": ((24.32, 2.04), (26.67, 1.76)),
    "gdp_pc_ppp": ((8.92, 1.02), (10.49, 0.61)),
    "exports": ((3.45, 0.58), (3.84, 0.61)),
    "health_exp": ((1.69, 0.44), (1.97, 0.36)),
    "military_exp": ((0.33, 1.03), (0.51, 0.67)),
    "gov_eff": ((-0.43, 0.84), (0.83, 0.74)),
    "pop_65": ((0.41, 0.38), (0.86, 0.48)),
}
VAC_TARGET = (0.55, 1.57)
LOGGED = {"cases", "gdp", "gdp_pc_ppp", "exports", "health_exp", "military_exp", "pop_65", "vac_php"}

COLUMNS = [
    "iso3", "name", "started", "first_vaccination", "vaccination_data_date", "days",
    "vac_php", "west", "china", "russia", "cases", "gov_response", "gdp",
    "gdp_pc_ppp", "exports", "health_exp", "military_exp", "gov_eff", "pop_65",
    "soft_power_30",
]


def parse_raw():
    rows = []
    keys = ["gdp", "gdp_pc_ppp", "gov_eff", "pop_65", "cases", "exports",
            "health_exp", "military_exp", "gov_response"]
    for line in RAW.strip().splitlines():
        parts = line.split("|")
        iso3, name, vals = parts[0], parts[1], parts[2:]
        assert len(vals) == len(keys), iso3
        rec = {"iso3": iso3, "name": name}
        for k, v in zip(keys, vals):
            rec[k] = float(v) if v else None
        rec["gdp"] = rec["gdp"] * 1e9 if rec["gdp"] is not None else None
        rec["gdp_pc_ppp"] = rec["gdp_pc_ppp"] * 1e3 if rec["gdp_pc_ppp"] is not None else None
        if iso3 in NO_RESPONSE:
            rec["gov_response"] = None
        rows.append(rec)
    return rows


def model_scale(code, v):
    return math.log(v) if code in LOGGED else v


def raw_scale(code, v):
    return math.exp(v) if code in LOGGED else v


def calibrate(rows, code, group_of, targets):
    """One increasing affine map on the modelling scale, fixed by the group means."""
    means = []
    for g in range(len(targets)):
        xs = [model_scale(code, r[code]) for r in rows if group_of(r) == g and r[code] is not None]
        means.append(statistics.fmean(xs))
    if len(targets) == 1:
        (mu, sd), = targets
        xs = [model_scale(code, r[code]) for r in rows if r[code] is not None]
        slope, shift = sd / statistics.stdev(xs), mu - sd / statistics.stdev(xs) * means[0]
    else:
        slope = (targets[1][0] - targets[0][0]) / (means[1] - means[0])
        shift = targets[0][0] - slope * means[0]
    assert slope > 0, code
    for r in rows:
        if r[code] is not None:
            r[code] = raw_scale(code, shift + slope * model_scale(code, r[code]))


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return f"{v:.6g}"


def main():
    rows = parse_raw()
    assert len(rows) == 189 and len({r["iso3"] for r in rows}) == 189
    assert set(STARTED) <= {r["iso3"] for r in rows} and len(STARTED) == 56
    started = lambda r: int(r["iso3"] in STARTED)

    for code, targets in TARGETS.items():
        calibrate(rows, code, started, targets)

    vac_rows = [r for r in rows if started(r)]
    for r in vac_rows:
        r["vac_php"] = STARTED[r["iso3"]][0]
    calibrate(vac_rows, "vac_php", lambda r: 0, [VAC_TARGET])

    out = []
    for r in sorted(rows, key=lambda r: r["iso3"]):
        s = started(r)
        rec = {c: None for c in COLUMNS}
        rec.update({k: r[k] for k in (*TARGETS, "gov_response")})
        rec["iso3"], rec["name"], rec["started"] = r["iso3"], r["name"], s
        rec["soft_power_30"] = int(r["iso3"] in SOFT_POWER_30)
        providers = STARTED[r["iso3"]][3] if s else ""
        rec["west"] = int("W" in providers)
        rec["china"] = int("C" in providers)
        rec["russia"] = int("R" in providers)
        if s:
            _, first, last, _ = STARTED[r["iso3"]]
            rec["first_vaccination"], rec["vaccination_data_date"] = first, last
            rec["days"] = (dt.date.fromisoformat(last) - dt.date.fromisoformat(first)).days
            rec["vac_php"] = r["vac_php"]
        out.append(rec)

    path = Path(__file__).with_name("snapshot_2021-01-30.csv")
    with path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COLUMNS)
        for rec in out:
            w.writerow([rec[c] if c in ("iso3", "name", "first_vaccination", "vaccination_data_date")
                        and rec[c] is not None else fmt(rec[c]) for c in COLUMNS])
    print(f"wrote {path} ({len(out)} rows)")


if __name__ == "__main__":
    main()
