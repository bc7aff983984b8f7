"""Calibrated Newton seeds for the contact-family profiles (N = 1).

Rows are (n, f2(0), f4(0), f6(0), f8(0), y0) per branch index, for the
normalization f(0) = 1 and the divergence-form drift coefficient.
Seeds only accelerate the solves: every returned profile is verified
against the interface conditions at run time.
"""

F0_SEEDS = {
    1: [
        (0.001, -0.261664780385, 0.168089251936, -0.141322206112, 0.123971566742, 6.31101249808),
        (0.01, -0.261912615323, 0.168381713672, -0.141632854698, 0.124197360398, 6.30728607853),
        (0.03, -0.262468377074, 0.16903842813, -0.142331180567, 0.124705596144, 6.29894507455),
        (0.06, -0.263315243529, 0.170041461584, -0.143399826638, 0.125485084092, 6.28627573753),
        (0.1, -0.264469814153, 0.171413483506, -0.144865601913, 0.126557562838, 6.26908139825),
        (0.15, -0.265955521631, 0.173186714224, -0.146766802281, 0.127954138084, 6.24708697621),
        (0.22, -0.268119236664, 0.17578466778, -0.149565957623, 0.130021096049, 6.21531537164),
        (0.3, -0.270720274253, 0.178932033517, -0.152978662654, 0.132557451237, 6.17752187184),
        (0.4, -0.274182080007, 0.183162156829, -0.157602167039, 0.136020340004, 6.12788033759),
        (0.5, -0.277903890712, 0.187762497351, -0.162677508552, 0.139854388406, 6.07532486557),
        (0.62, -0.282760048813, 0.193846888559, -0.169464573829, 0.145030960961, 6.00797620523),
        (0.75, -0.288578321518, 0.201259269089, -0.177845936401, 0.151495650437, 5.92903958911),
        (0.85, -0.29351647085, 0.207655624537, -0.185176925789, 0.157211120602, 5.8634861832),
        (0.95, -0.298927243809, 0.214775687779, -0.193443544416, 0.16372046893, 5.79312294815),
        (1, -0.301834484763, 0.218649734794, -0.197988090013, 0.167326972632, 5.75593090318),
        (1.1, -0.308113253191, 0.227132605945, -0.208053194258, 0.175382934563, 5.67703181104),
        (1.25, -0.318928019311, 0.242119077597, -0.226214862236, 0.190149385868, 5.54554779766),
        (1.325, -0.325113645315, 0.250906478489, -0.237088096491, 0.199127236606, 5.47277366413),
        (1.3625, -0.328440552092, 0.255698271253, -0.243086708585, 0.204123282547, 5.43434695558),
        (1.371875, -0.329299026667, 0.256942221558, -0.2446519386, 0.205431906294, 5.42451169726),
        (1.37890625, -0.329950210576, 0.257887852871, -0.245844002178, 0.206429922362, 5.4170731979),
    ],
    2: [
        (0.001, -0.307930690758, 0.18155945505, -0.135634412926, 0.113262969844, 9.45702923703),
        (0.01, -0.30806228861, 0.181866376309, -0.135992060409, 0.113529212943, 9.4452831155),
        (0.03, -0.30835764343, 0.182555262965, -0.136796084653, 0.114128432332, 9.41900432624),
        (0.06, -0.308808381749, 0.183606644535, -0.138026597567, 0.115047303188, 9.37912342049),
        (0.1, -0.309424234573, 0.185043248335, -0.139714591026, 0.11631126649, 9.32506536413),
        (0.15, -0.310219062451, 0.186897285667, -0.141904292243, 0.117956744992, 9.25602891094),
        (0.22, -0.311381532256, 0.189608196905, -0.145128548945, 0.120391274138, 9.15652913869),
        (0.3, -0.312787126188, 0.192883736606, -0.149059606456, 0.123377509585, 9.03852312341),
        (0.4, -0.314672798617, 0.197271124443, -0.154384359948, 0.12745268737, 8.88412038037),
        (0.5, -0.31672086944, 0.202022936624, -0.160226297477, 0.131961928561, 8.72142080474),
        (0.62, -0.319429078193, 0.208276403261, -0.168029542442, 0.138044718648, 8.51413656275),
        (0.75, -0.322733856792, 0.215846905389, -0.17764461974, 0.145629795905, 8.27303404331),
        (0.85, -0.325595970934, 0.222337891741, -0.186028896358, 0.152322095488, 8.07443498429),
        (0.95, -0.328798526683, 0.229518443008, -0.195447093952, 0.159924055645, 7.86302910021),
        (1, -0.33055004752, 0.233405884765, -0.2006059147, 0.164125168247, 7.75206772224),
        (1.1, -0.334411063514, 0.241871132906, -0.211977680358, 0.173477044451, 7.51857606608),
        (1.175, -0.337677408638, 0.24891817504, -0.221580484581, 0.18147043984, 7.33238353856),
        (1.19375, -0.33855157567, 0.250786310931, -0.224145789961, 0.183620539868, 7.28423038346),
        (1.203125, -0.338998037982, 0.251737526908, -0.225455054303, 0.184720272422, 7.25990242849),
        (1.206640625, -0.339167116979, 0.252097249374, -0.225950712947, 0.185137025178, 7.25073566548),
    ],
    3: [
        (0.003, -0.313714708182, 0.185675036397, -0.136244592383, 0.112432862375, 12.5542907023),
        (0.03, -0.31406529002, 0.186601710319, -0.137354921107, 0.11325957356, 12.4903186528),
        (0.06, -0.314462736438, 0.187651604371, -0.138617197616, 0.11420163579, 12.4183302298),
        (0.1, -0.31500611113, 0.189085751163, -0.140348807848, 0.115497737105, 12.3208241047),
        (0.15, -0.315707992714, 0.190935895778, -0.142595140563, 0.117185454154, 12.1964264961),
        (0.22, -0.316735790034, 0.193639657828, -0.145902816976, 0.119683271331, 12.0173923019),
        (0.3, -0.317980684406, 0.196904271028, -0.149935480315, 0.122748351025, 11.8054663133),
        (0.4, -0.319654744358, 0.20127315204, -0.155397330633, 0.126933070189, 11.5288798801),
        (0.5, -0.321478582597, 0.206000012955, -0.161388415637, 0.131565767122, 11.2383510705),
        (0.62, -0.323900039521, 0.212213063294, -0.16938768275, 0.137818006664, 10.8696846623),
        (0.75, -0.326871171675, 0.219723504137, -0.179237151848, 0.145617364793, 10.443144119),
        (0.85, -0.329459647431, 0.226153679188, -0.187817356425, 0.152499689914, 10.0938111984),
        (0.95, -0.332373437114, 0.233257391923, -0.19744398818, 0.160316435226, 9.72414044357),
        (0.9625, -0.332764032222, 0.23419852976, -0.198730425799, 0.161368508683, 9.67640733365),
        (0.975, -0.333161018734, 0.235152352538, -0.200036753547, 0.16243864128, 9.62832234144),
        (0.9875, -0.333564573193, 0.236119145003, -0.201363435761, 0.163527291554, 9.57988137043),
        (1.05, -0.335687466095, 0.241158255778, -0.208319466957, 0.169265486458, 9.33218802104),
        (1.1, -0.337524469211, 0.245455672449, -0.214303911735, 0.174242412523, 9.12718257793),
        (1.109375, -0.337883969178, 0.246289882682, -0.215470945512, 0.175217262717, 9.08803964382),
        (1.1375, -0.338993047122, 0.248849595243, -0.219062374734, 0.178225995724, 8.96923825318),
        (1.1421875, -0.339182506, 0.249284777184, -0.219674505367, 0.178740120211, 8.94923548744),
    ],
}
